"""Error-vs-distance scans over the committed dissociation grids.

Runs cd-adapt with the static l=1 pool, cd-adapt with the l=2 pool
evaluated at t'=0.75, two-step dcqo, and fci on every problem file under
data/scans/<molecule>/.  Two CSVs per molecule (the t'-evaluated pool only
applies to the l=2 curve) plus a joined per-distance summary on stdout.

    python3 scripts/run_scans.py [--molecule lih,hf,beh2] [--threads N]
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

from cdadapt import cli

ROOT = Path(__file__).resolve().parents[1]


def run_scan(mol: str, out: Path, threads: int, *flags: str) -> Path:
    argv = [
        "scan",
        "--problem", str(ROOT / "data" / "scans" / mol),
        "--threads", str(threads),
        "--out", str(out),
        *flags,
    ]
    rc = cli.main(argv)
    if rc != 0:
        raise SystemExit(rc)
    return out


def summarize(paths: list[Path]) -> None:
    by_dist = defaultdict(dict)
    for path in paths:
        with open(path) as fh:
            for row in csv.DictReader(fh):
                key = f"{row['method']}_l{row['l']}" if row["l"] else row["method"]
                by_dist[float(row["distance"])][key] = row
    print(f"{'r':>6} {'err(cd l1)':>12} {'err(cd l2)':>12} {'err(dcqo)':>12}")
    for dist in sorted(by_dist):
        rows = by_dist[dist]

        def err(key):
            row = rows.get(key)
            return f"{float(row['error']):12.3e}" if row and row["error"] else " " * 12

        print(f"{dist:6.3f} {err('cd_adapt_l1')} {err('cd_adapt_l2')} {err('dcqo_l1')}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--molecule", default="lih,hf,beh2", help="comma list")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=str(ROOT / "results" / "scans"))
    args = ap.parse_args(argv)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for mol in args.molecule.split(","):
        mol = mol.strip()
        print(f"\n== {mol} ==")
        csvs = [
            run_scan(mol, out_dir / f"{mol}_l1.csv", args.threads,
                     "--method", "cd-adapt,dcqo,fci", "--l", "1", "--trotter", "2"),
            run_scan(mol, out_dir / f"{mol}_l2.csv", args.threads,
                     "--method", "cd-adapt", "--l", "2", "--t-prime", "0.75"),
        ]
        summarize(csvs)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
