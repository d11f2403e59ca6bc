"""Drives a running circlet-serve over real HTTP: the routes the web client uses."""

import json
import pathlib
import subprocess
import sys
import urllib.error
import urllib.request


def call(base, method, path, body=None, headers=None):
    data = None if body is None else json.dumps(body).encode()
    req = urllib.request.Request(base + path, data=data, method=method, headers=headers or {})
    if data is not None:
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req, timeout=10) as r:
            raw = r.read()
            return r.status, dict(r.headers), json.loads(raw) if raw else None
    except urllib.error.HTTPError as e:
        raw = e.read()
        return e.code, dict(e.headers), json.loads(raw) if raw else None


def main():
    server, corpus = sys.argv[1], pathlib.Path(sys.argv[2])
    proc = subprocess.Popen(
        [server, "--listen", "127.0.0.1:0", "--cors-origin", "http://localhost:5173", "--step-cap", "3"],
        stdout=subprocess.PIPE,
        stderr=subprocess.DEVNULL,
        text=True,
    )
    try:
        line = proc.stdout.readline().strip()
        assert line.startswith("listening on "), line
        base = "http://" + line[len("listening on "):]

        status, headers, _ = call(base, "OPTIONS", "/sessions")
        assert status == 204
        assert headers.get("Access-Control-Allow-Origin") == "http://localhost:5173"

        status, _, body = call(base, "POST", "/sessions", {"spec": (corpus / "NATSUM.cspec").read_text()})
        assert status == 201, body
        sid = body["id"]
        call(base, "POST", f"/sessions/{sid}/goals", {"text": "sum(M:Nat, N:Nat) = sum(N:Nat, M:Nat)"})

        rules = []
        for _ in range(7):
            status, _, body = call(base, "POST", f"/sessions/{sid}/step", {"tactic": "induction", "mode": "basic"})
            assert status == 200, body
            rules.append(body["delta"]["rule"])
        assert rules == ["Derive", "Derive", "Reduce", "Reduce", "Derive", "Reduce", "Reduce"], rules

        status, _, trace = call(base, "GET", f"/sessions/{sid}/trace?format=data")
        assert status == 200 and trace["format"] == "data"
        records = [json.loads(l) for l in trace["document"].splitlines() if l]
        assert [r["rule"] for r in records if r.get("type") == "step"] == rules

        status, _, body = call(base, "POST", "/sessions", {"spec": (corpus / "STREAMNAT.cspec").read_text()})
        sid2 = body["id"]
        call(base, "POST", f"/sessions/{sid2}/goals", {"text": "zeros + S:Stream = S:Stream"})
        status, _, body = call(base, "POST", f"/sessions/{sid2}/tactic", {"tactic": "coinduction"})
        assert body["status"] == "stuck", body
        assert "failed during coinduction" in body["report"]["message"], body["report"]
        status, _, body = call(base, "POST", f"/sessions/{sid2}/generalize", {"subterm": "hd(S:Stream)", "var": "N:Nat"})
        assert status == 200 and body["goal"]["text"] == "sum(0,N:Nat) = N:Nat", body

        status, _, body = call(base, "POST", f"/sessions/{sid2}/goals", {"text": "sum(0,"})
        assert status == 422 and body["diagnostics"], body
        assert call(base, "GET", "/sessions/nope")[0] == 404
        print("http service: ok")
    finally:
        proc.terminate()
        proc.wait(timeout=10)


if __name__ == "__main__":
    main()
