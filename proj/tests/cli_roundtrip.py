#!/usr/bin/env python3
"""End-to-end CLI check: identical invocations must produce byte-identical
outputs, and the subcommands must succeed on the shipped scenarios."""

import filecmp
import pathlib
import subprocess
import sys
import tempfile


def run(cmd):
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write("command failed: %s\n%s\n%s\n" % (cmd, proc.stdout, proc.stderr))
        sys.exit(1)
    return proc


def main():
    binary = sys.argv[1]
    scenarios = pathlib.Path(sys.argv[2])
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        scn = str(scenarios / "complete_coherent.scn")
        run([binary, "run", "--scenario", scn, "--out", str(tmp / "a")])
        run([binary, "run", "--scenario", scn, "--out", str(tmp / "b")])
        for name in ("report.json", "rho.csv", "wigner_initial.csv", "samples.csv"):
            fa, fb = tmp / "a" / name, tmp / "b" / name
            if not (fa.exists() and fb.exists()):
                sys.stderr.write("missing output %s\n" % name)
                sys.exit(1)
            if not filecmp.cmp(fa, fb, shallow=False):
                sys.stderr.write("outputs differ for %s\n" % name)
                sys.exit(1)

        run([binary, "run", "--scenario", scn, "--out", str(tmp / "c"),
             "--format", "csv"])
        if not (tmp / "c" / "report.csv").exists():
            sys.stderr.write("csv report missing\n")
            sys.exit(1)

        # region scenario emits the final-state Wigner function
        run([binary, "run", "--scenario", str(scenarios / "pred_region.scn"),
             "--out", str(tmp / "d")])
        if not (tmp / "d" / "wigner_final.csv").exists():
            sys.stderr.write("wigner_final.csv missing for region scenario\n")
            sys.exit(1)

        run([binary, "sample", "--scenario", scn, "--out", str(tmp / "e"),
             "--seed", "7"])
        run([binary, "kernels", "--scenario", str(scenarios / "min_disturb.scn"),
             "--out", str(tmp / "f")])
        if not (tmp / "f" / "kernels.json").exists():
            sys.stderr.write("kernels.json missing\n")
            sys.exit(1)
    print("cli roundtrip ok")


if __name__ == "__main__":
    main()
