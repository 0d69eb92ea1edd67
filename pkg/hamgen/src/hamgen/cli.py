"""Command line entry point.

Generation mode writes an integrals.v1 / pauli.v1 file pair per geometry:

    hamgen --molecule H2 --basis sto-3g --r 0.735 --out data/
    hamgen --molecule LiH --basis sto-3g --active 4,5 --grid 0.8:3.2:0.2 --out data/

Verification mode re-checks files against their recorded metadata:

    hamgen --verify data/h2_sto3g_0.735.integrals.json ...
"""

from __future__ import annotations

import argparse
import sys

from hamgen import emit
from hamgen.molecules import BUILDERS


def _parse_active(text: str) -> tuple[int, int]:
    try:
        ne, no = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--active expects 'n_electrons,n_orbitals', got {text!r}"
        ) from None
    if ne <= 0 or no <= 0:
        raise argparse.ArgumentTypeError("--active values must be positive")
    return ne, no


def _parse_grid(text: str) -> list[float]:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--grid expects 'start:stop:step', got {text!r}"
        ) from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("--grid needs step > 0 and stop >= start")
    n = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 10) for i in range(n)]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hamgen",
        description="Generate and verify second-quantized molecular problem files.",
    )
    ap.add_argument("--molecule", choices=sorted(BUILDERS))
    ap.add_argument("--basis", default="sto-3g")
    ap.add_argument("--r", type=float, help="bond distance in angstrom")
    ap.add_argument("--grid", type=_parse_grid, help="distance grid start:stop:step")
    ap.add_argument(
        "--active",
        type=_parse_active,
        help="active space as 'n_electrons,n_orbitals' (default: full space)",
    )
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument(
        "--degenerate-gauge",
        choices=("generic", "aligned"),
        default="generic",
        help="orbital gauge when an active-window edge splits a degenerate "
        "MO pair: 'generic' mixes the pair deterministically, 'aligned' "
        "keeps the eigensolver output",
    )
    ap.add_argument(
        "--verify",
        nargs="+",
        metavar="FILE",
        help="verify existing problem files instead of generating",
    )
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)

    if args.verify:
        bad = 0
        for path in args.verify:
            try:
                problems = emit.verify(path)
            except (OSError, ValueError, KeyError) as exc:
                problems = [f"unreadable: {exc}"]
            if problems:
                bad += 1
                for msg in problems:
                    print(f"{path}: FAIL {msg}")
            else:
                print(f"{path}: ok")
        return 1 if bad else 0

    if not args.molecule:
        ap.error("--molecule is required unless --verify is given")
    if (args.r is None) == (args.grid is None):
        ap.error("provide exactly one of --r or --grid")

    distances = args.grid if args.grid is not None else [args.r]
    ne, no = args.active if args.active else (None, None)
    for dist in distances:
        gen = emit.generate(
            args.molecule, args.basis, dist, args.out,
            n_active_electrons=ne, n_active_orbitals=no,
            degenerate_gauge=args.degenerate_gauge,
        )
        fci_txt = f"{gen.e_fci:.8f}" if gen.e_fci is not None else "skipped"
        print(
            f"{args.molecule} {args.basis} r={dist:g} -> {gen.integrals_path} "
            f"(E_ref={gen.e_rhf:.8f}, E_exact={fci_txt}, "
            f"{gen.problem.n_spin_orbitals} spin orbitals, "
            f"{len(gen.pauli)} strings)"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
