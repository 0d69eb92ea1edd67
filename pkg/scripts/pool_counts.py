"""Pool sizes per expansion order for the committed 10-qubit systems.

Builds the nested-commutator basis once per molecule and reports eta, the
number of distinct Pauli strings in the static pool, at l = 1 and l = 2,
optionally sweeping the magnitude threshold at l = 2 (the counts there are
threshold-sensitive because sixth- and higher-order commutators carry many
near-zero weights).

    python3 scripts/pool_counts.py [--sweep]
"""

import argparse
from pathlib import Path

from cdadapt.molham import build_initial_hamiltonian, load_problem
from cdadapt.pools import build_nested_basis, extract_pool_static

ROOT = Path(__file__).resolve().parents[1]

PROBLEMS = {
    "lih": ROOT / "data" / "lih_sto3g_1.578_4e5o.pauli.json",
    "hf": ROOT / "data" / "hf_631g_0.917_4e5o.pauli.json",
    "beh2": ROOT / "data" / "beh2_sto3g_1.500_4e5o.pauli.json",
}

SWEEP = [1e-5, 8e-6, 6e-6, 5e-6, 4e-6, 3e-6, 2e-6, 1e-6]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sweep", action="store_true", help="threshold sweep at l=2")
    ap.add_argument("--threshold", type=float, default=1e-6)
    args = ap.parse_args(argv)

    for mol, path in PROBLEMS.items():
        problem = load_problem(str(path))
        basis = build_nested_basis(
            build_initial_hamiltonian(problem.hf_bits), problem.h_f, 2
        )
        eta1 = len(extract_pool_static(basis, order=1, pool_threshold=args.threshold))
        eta2 = len(extract_pool_static(basis, order=2, pool_threshold=args.threshold))
        print(f"{mol}: eta(l=1) = {eta1}  eta(l=2) = {eta2}  "
              f"[threshold {args.threshold:g}]")
        if args.sweep:
            for thr in SWEEP:
                eta = len(extract_pool_static(basis, order=2, pool_threshold=thr))
                print(f"  threshold {thr:8.0e}: eta(l=2) = {eta}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
