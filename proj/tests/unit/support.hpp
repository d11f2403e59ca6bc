#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "circlet/spec.hpp"

namespace testing {

inline std::string corpus_path(const std::string& file) { return std::string(CIRCLET_CORPUS) + "/" + file; }

inline std::string corpus_text(const std::string& file) {
  std::ifstream in(corpus_path(file));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline circlet::Specification corpus(const std::string& name) {
  return circlet::load_spec_file(corpus_path(name + ".cspec"));
}

}  // namespace testing
