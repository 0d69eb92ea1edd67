"""Method comparison at the tabulated geometries.

For each committed problem file this runs cd-adapt at l=1, cd-adapt at l=2
with the pool evaluated at t'=0.75, fermionic adapt, and two-step dcqo,
writes one report JSON per run under results/tables/, then joins them into
a per-molecule comparison table (stdout + CSV) via the compare subcommand.

    python3 scripts/run_tables.py [--molecule lih,hf,beh2] [--out results/tables]
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from cdadapt import cli

ROOT = Path(__file__).resolve().parents[1]


@dataclass(frozen=True)
class MethodSpec:
    tag: str  # file-name suffix
    argv: tuple  # extra CLI flags


SPECS = [
    MethodSpec("cd1", ("--method", "cd-adapt", "--l", "1")),
    MethodSpec("cd2_t075", ("--method", "cd-adapt", "--l", "2", "--t-prime", "0.75")),
    MethodSpec("ferm", ("--method", "adapt")),
    MethodSpec("dcqo", ("--method", "dcqo", "--l", "1", "--trotter", "2")),
    MethodSpec("fci", ("--method", "fci")),
]

PROBLEMS = {
    "lih": ROOT / "data" / "lih_sto3g_1.578_4e5o.pauli.json",
    "hf": ROOT / "data" / "hf_631g_0.917_4e5o.pauli.json",
    "beh2": ROOT / "data" / "beh2_sto3g_1.500_4e5o.pauli.json",
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--molecule", default="lih,hf,beh2", help="comma list")
    ap.add_argument("--out", default=str(ROOT / "results" / "tables"))
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for mol in args.molecule.split(","):
        problem = PROBLEMS[mol.strip()]
        reports = []
        for spec in SPECS:
            path = out / f"{mol}_{spec.tag}.json"
            rc = cli.main(
                ["run", "--problem", str(problem), "--out", str(path), *spec.argv]
            )
            if rc != 0:
                print(f"{mol}/{spec.tag}: exit {rc}", file=sys.stderr)
                return rc
            reports.append(str(path))
        print(f"\n== {mol} ==")
        rc = cli.main(
            ["compare", *reports, "--out", str(out / f"{mol}_table.csv")]
        )
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
