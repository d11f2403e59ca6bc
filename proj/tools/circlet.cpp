// circlet: batch runner and REPL for proof sessions over a .cspec file.

#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "circlet/script.hpp"

using namespace circlet;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CIRCLET_LIMITS="max-derive=20,max-rewrite=5000,mode=basic"
void apply_env_limits(Session& s) {
  const char* env = std::getenv("CIRCLET_LIMITS");
  if (!env) return;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("CIRCLET_LIMITS: expected key=value, got " + item);
    s.set(item.substr(0, eq), item.substr(eq + 1));
  }
}

class LineEditor {
 public:
  explicit LineEditor(std::vector<std::string> words) : words_(std::move(words)) {}

  // Returns false on end of input.
  bool read(const std::string& prompt, std::string& line) {
    if (!isatty(STDIN_FILENO)) {
      std::cerr << prompt << std::flush;
      return static_cast<bool>(std::getline(std::cin, line));
    }
    termios old{};
    tcgetattr(STDIN_FILENO, &old);
    termios raw = old;
    raw.c_lflag &= ~static_cast<tcflag_t>(ICANON | ECHO);
    raw.c_cc[VMIN] = 1;
    raw.c_cc[VTIME] = 0;
    tcsetattr(STDIN_FILENO, TCSAFLUSH, &raw);
    line.clear();
    std::cerr << prompt << std::flush;
    bool ok = true;
    for (;;) {
      char c = 0;
      if (::read(STDIN_FILENO, &c, 1) != 1) {
        ok = false;
        break;
      }
      if (c == '\n' || c == '\r') {
        std::cerr << "\n";
        break;
      }
      if (c == 4) {  // ctrl-D
        if (line.empty()) {
          ok = false;
          break;
        }
        continue;
      }
      if (c == 3) {  // ctrl-C clears the line
        line.clear();
        std::cerr << "^C\n" << prompt << std::flush;
        continue;
      }
      if (c == 127 || c == 8) {
        if (!line.empty()) {
          // drop a whole UTF-8 sequence
          do line.pop_back();
          while (!line.empty() && (static_cast<unsigned char>(line.back()) & 0xC0) == 0x80);
          std::cerr << "\b \b" << std::flush;
        }
        continue;
      }
      if (c == '\t') {
        complete(prompt, line);
        continue;
      }
      if (c == 27) {  // swallow escape sequences (arrows)
        char seq[2];
        if (::read(STDIN_FILENO, seq, 2) != 2) break;
        continue;
      }
      line += c;
      std::cerr << c << std::flush;
    }
    tcsetattr(STDIN_FILENO, TCSAFLUSH, &old);
    return ok;
  }

 private:
  void complete(const std::string& prompt, std::string& line) {
    std::size_t b = line.size();
    while (b > 0 && (std::isalnum(static_cast<unsigned char>(line[b - 1])) || line[b - 1] == '-' || line[b - 1] == '_'))
      --b;
    std::string stem = line.substr(b);
    if (stem.empty()) return;
    std::vector<std::string> hits;
    for (const auto& w : words_)
      if (w.rfind(stem, 0) == 0 && std::find(hits.begin(), hits.end(), w) == hits.end()) hits.push_back(w);
    if (hits.empty()) return;
    if (hits.size() == 1) {
      std::string rest = hits[0].substr(stem.size());
      line += rest;
      std::cerr << rest << std::flush;
      return;
    }
    std::string common = hits[0];
    for (const auto& h : hits) {
      std::size_t k = 0;
      while (k < common.size() && k < h.size() && common[k] == h[k]) ++k;
      common.resize(k);
    }
    if (common.size() > stem.size()) {
      std::string rest = common.substr(stem.size());
      line += rest;
      std::cerr << rest << std::flush;
      return;
    }
    std::cerr << "\n";
    for (const auto& h : hits) std::cerr << h << "  ";
    std::cerr << "\n" << prompt << line << std::flush;
  }

  std::vector<std::string> words_;
};

int repl(Session& session, RunnerOptions opts) {
  std::vector<std::string> words = command_words();
  for (const auto& op : session.spec().sig.ops()) {
    std::string n = op->name;
    // completion offers the prefix spelling of mixfix names
    if (n.find('_') != std::string::npos) continue;
    words.push_back(n);
  }
  LineEditor ed(words);
  ScriptRunner runner(session, opts);
  std::cerr << "circlet: spec " << session.spec().name << " loaded. Type (help .) for commands.\n";
  std::string buffer, line;
  while (!runner.quit_requested()) {
    if (!ed.read(buffer.empty() ? "circlet> " : "    ...> ", line)) break;
    buffer += (buffer.empty() ? "" : "\n") + line;
    if (!command_complete(buffer)) continue;
    std::cout << runner.execute_text(buffer) << std::flush;
    buffer.clear();
  }
  return runner.exit_code() == 1 ? 0 : runner.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circular induction and coinduction prover"};
  std::string spec_path, script_path, mode, trace = "table";
  std::size_t max_derive = 0, max_rewrite = 0;
  bool plain = false;
  app.add_option("--spec", spec_path, "Specification file (.cspec)")->required()->check(CLI::ExistingFile);
  app.add_option("--script", script_path, "Command script; '-' reads standard input")->check(
      [](const std::string& p) { return p == "-" || std::ifstream(p) ? std::string() : "cannot read " + p; });
  app.add_option("--mode", mode, "Default induction mode")->check(CLI::IsMember({"basic", "extended", "subsort"}));
  app.add_option("--max-derive", max_derive, "Derive limit per proof")->check(CLI::PositiveNumber);
  app.add_option("--max-rewrite", max_rewrite, "Rewrite step budget per entailment")->check(CLI::PositiveNumber);
  app.add_option("--trace", trace, "Trace printed after each tactic")
      ->check(CLI::IsMember({"table", "dot", "data", "none"}));
  app.add_flag("--plain", plain, "Accept bare commands, one per line");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    Session session(read_file(spec_path), spec_path);
    apply_env_limits(session);
    if (!mode.empty()) session.set("mode", mode);
    if (max_derive) session.set("max-derive", std::to_string(max_derive));
    if (max_rewrite) session.set("max-rewrite", std::to_string(max_rewrite));
    RunnerOptions opts;
    opts.trace = trace == "none" ? std::nullopt : parse_trace_format(trace);

    if (script_path.empty() && isatty(STDIN_FILENO)) return repl(session, opts);
    std::string script;
    if (script_path.empty() || script_path == "-") {
      std::ostringstream ss;
      ss << std::cin.rdbuf();
      script = ss.str();
    } else {
      script = read_file(script_path);
    }
    BatchResult r = run_batch(session, script, plain, opts);
    std::cout << r.transcript << std::flush;
    return r.exit_code;
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.str() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "circlet: " << e.what() << "\n";
    return 1;
  }
}
