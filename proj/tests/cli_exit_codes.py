#!/usr/bin/env python3
"""Exercise the CLI's exit-code contract."""

import pathlib
import subprocess
import sys
import tempfile


def run(args):
    return subprocess.run(args, capture_output=True, text=True)


def main():
    cli = sys.argv[1]
    root = pathlib.Path(sys.argv[2])
    fig1 = str(root / "data/fig1.puzzle")
    fig1_sol = str(root / "data/fig1.solution")
    failures = []

    def expect(name, code, result):
        if result.returncode != code:
            failures.append(f"{name}: expected exit {code}, got {result.returncode}\n"
                            f"  stdout: {result.stdout[:200]!r}\n"
                            f"  stderr: {result.stderr[:200]!r}")

    with tempfile.TemporaryDirectory() as tmp:
        tmpdir = pathlib.Path(tmp)

        expect("solve feasible", 0, run([cli, "solve", fig1]))
        expect("verify ok", 0, run([cli, "verify", fig1, fig1_sol]))

        infeasible = tmpdir / "inf.puzzle"
        infeasible.write_text("evolomino v1\nrows 1 cols 3\ngrid:\n...\narrow: 1,1 1,2 1,3\n")
        expect("solve infeasible", 1, run([cli, "solve", str(infeasible)]))

        r = run([cli, "solve", fig1, "--enumerate", "5"])
        expect("enumerate", 0, r)
        if "proved unique" not in r.stdout:
            failures.append("enumerate: missing 'proved unique' line")

        bad_solution = tmpdir / "bad.solution"
        bad_solution.write_text("evolomino v1\nrows 5 cols 5\ngrid:\n" + (".....\n" * 5))
        expect("verify violations", 1, run([cli, "verify", fig1, str(bad_solution)]))

        # a node-starved run cannot finish: timeout maps to exit 2
        nogivens = tmpdir / "open.puzzle"
        nogivens.write_text(
            "evolomino v1\nrows 5 cols 5\ngrid:\n.....\n...#.\n.....\n.....\n....#\n"
            "arrow: 5,1 5,2 5,3\narrow: 3,1 2,1 1,1 1,2 1,3 1,4\narrow: 4,5 4,4 3,4\n")
        expect("solve timeout", 2,
               run([cli, "solve", str(nogivens), "--time-limit", "0.000001"]))

        expect("usage error", 64, run([cli]))
        expect("unknown flag", 64, run([cli, "solve", fig1, "--no-such-flag"]))
        expect("missing file", 65, run([cli, "solve", str(tmpdir / "absent.puzzle")]))

        malformed = tmpdir / "broken.puzzle"
        malformed.write_text("evolomino v1\nrows 2 cols 2\ngrid:\n..\n..\narrow: 1,1 2,2 1,2\n")
        r = run([cli, "solve", str(malformed)])
        expect("malformed puzzle", 65, r)
        if "non-contiguous arrow path" not in r.stderr:
            failures.append("malformed puzzle: parser message not propagated verbatim")

    for f in failures:
        print(f)
    if not failures:
        print("exit-code contract holds")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
