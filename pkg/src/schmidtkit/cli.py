"""Command-line front end over the canonical JSON file formats.

Exit codes: 0 for success or an affirmative verdict, 1 for a negative
verdict (not decomposable, infeasible, condition fails), 2 for usage
or input errors.  Reports go to standard output as deterministic JSON;
--out additionally writes them to a file.  Every randomized step takes
--seed and defaults to 0, so identical invocations produce identical
bytes.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .bipartite import schmidt_decompose_bipartite, schmidt_number, spectra
from .compose import Grouping, compose, rank_inequality_check
from .errors import (
    IndicesOutOfRange,
    InvalidArgs,
    MalformedCut,
    SchmidtError,
)
from .fixtures import bell, ghz, haar_random_state, w_state
from .multipartite import check_decomposable, equal_spectra_check, random_decomposable_state
from .partition import decide, max_schmidt_number
from .purify import Purification, linking_unitary, purify
from .state import Bipartition, StateTensor

__all__ = ["main", "parse_cut", "parse_grouping"]


def parse_cut(text: str, n: int) -> Bipartition:
    """Parse "1,3|2" into a bipartition of subsystems 1..n.

    Both sides must be nonempty, indices 1-based, and together cover
    every subsystem exactly once.
    """
    parts = text.split("|")
    if len(parts) != 2:
        raise MalformedCut(f"cut {text!r} must contain exactly one '|'")
    sides = []
    for part in parts:
        items = [p.strip() for p in part.split(",")]
        if not all(items) or not items:
            raise MalformedCut(f"cut {text!r} has an empty index")
        try:
            sides.append(tuple(int(p) for p in items))
        except ValueError:
            raise MalformedCut(f"cut {text!r} has a non-integer index") from None
    left, right = sides
    seen = left + right
    if len(set(seen)) != len(seen):
        raise IndicesOutOfRange(f"cut {text!r} repeats a subsystem index")
    if any(i < 1 or i > n for i in seen):
        raise IndicesOutOfRange(
            f"cut {text!r} uses indices outside 1..{n}")
    if len(seen) != n:
        missing = sorted(set(range(1, n + 1)) - set(seen))
        raise IndicesOutOfRange(
            f"cut {text!r} does not cover subsystems {missing}")
    return Bipartition(tuple(sorted(left)), tuple(sorted(right)))


def parse_grouping(text: str) -> Grouping:
    try:
        sizes = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise InvalidArgs(f"grouping {text!r} must be comma-separated integers") from None
    return Grouping(sizes)


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise InvalidArgs(f"{what} {text!r} must be comma-separated integers") from None


def _parse_complex(text: str, what: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidArgs(f"{what} {text!r} must be 're,im'")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise InvalidArgs(f"{what} {text!r} must be 're,im'") from None


def _emit(doc: dict, out: str | None) -> None:
    text = io.dumps_canonical(doc)
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _tol_kwargs(args) -> dict:
    kw = {}
    if args.tol_rank is not None:
        kw["rank_tol"] = args.tol_rank
    if args.tol_diag is not None:
        kw["diag_tol"] = args.tol_diag
    if args.tol_orth is not None:
        kw["orth_tol"] = args.tol_orth
    return kw


def _cmd_check(args) -> int:
    state = io.load_state(args.state)
    report = check_decomposable(state, args.seed, **_tol_kwargs(args))
    _emit(io.report_to_dict(report), args.out)
    return 0 if report.decomposable else 1


def _cmd_decompose(args) -> int:
    state = io.load_state(args.state)
    if args.cut is not None:
        cut = parse_cut(args.cut, state.subsystem_count)
        rank_tol = args.tol_rank
        bi = schmidt_decompose_bipartite(state, cut, rank_tol)
        _emit(io.decomposition_to_dict(bi.decomposition, cut), args.out)
        return 0
    if state.subsystem_count == 2:
        cut = Bipartition((1,), (2,))
        bi = schmidt_decompose_bipartite(state, cut, args.tol_rank)
        _emit(io.decomposition_to_dict(bi.decomposition, cut), args.out)
        return 0
    report = check_decomposable(state, args.seed, **_tol_kwargs(args))
    if report.decomposable:
        _emit(io.decomposition_to_dict(report.decomposition), args.out)
        return 0
    _emit(io.report_to_dict(report), args.out)
    return 1


def _cmd_number(args) -> int:
    state = io.load_state(args.state)
    cut = parse_cut(args.cut, state.subsystem_count)
    value = schmidt_number(state, cut, args.tol_rank)
    _emit({"cut": {"left": list(cut.left), "right": list(cut.right)},
           "schmidt_number": value}, args.out)
    return 0


def _cmd_spectra(args) -> int:
    state = io.load_state(args.state)
    if args.equal:
        ok, table = equal_spectra_check(state)
        _emit({"equal": ok,
               "spectra": {",".join(map(str, k)): [float(x) for x in v]
                           for k, v in sorted(table.items())}},
              args.out)
        return 0 if ok else 1
    if args.cut is not None:
        keep = parse_cut(args.cut, state.subsystem_count).left
    else:
        keep = (1,)
    values = spectra(state, keep)
    _emit({"keep": list(keep), "spectrum": [float(v) for v in values]},
          args.out)
    return 0


def _fmt_side(indices) -> str:
    return "{" + ",".join(map(str, indices)) + "}"


def _cmd_partition(args) -> int:
    dims = _parse_ints(args.dims, "--dims")
    if args.target is None:
        sol = max_schmidt_number(dims)
        doc = _partition_doc(dims, sol)
        doc["summary"] = (f"K={sol.k} left={_fmt_side(sol.bipartition.left)} "
                          f"right={_fmt_side(sol.bipartition.right)}")
        _emit(doc, args.out)
        return 0
    sol = decide(dims, args.target)
    if sol is None:
        best = max_schmidt_number(dims)
        _emit({"dims": list(dims), "target": args.target, "feasible": False,
               "max_k": best.k,
               "summary": f"infeasible: max K={best.k} < {args.target}"},
              args.out)
        return 1
    doc = _partition_doc(dims, sol)
    doc["target"] = args.target
    doc["feasible"] = True
    doc["summary"] = (f"K={sol.k} >= {args.target} via "
                      f"left={_fmt_side(sol.bipartition.left)}")
    _emit(doc, args.out)
    return 0


def _partition_doc(dims, sol) -> dict:
    return {
        "dims": list(dims),
        "k": sol.k,
        "left": list(sol.bipartition.left),
        "right": list(sol.bipartition.right),
        "left_product": sol.left_product,
        "right_product": sol.right_product,
    }


def _cmd_compose(args) -> int:
    left = io.load_decomposition(args.left)
    right = io.load_decomposition(args.right)
    grouping = parse_grouping(args.grouping)
    merged = compose(left, right, grouping)
    _emit(io.decomposition_to_dict(merged), args.out)
    return 0


def _cmd_inequality(args) -> int:
    phi = io.load_state(args.phi)
    gamma = io.load_state(args.gamma)
    alpha = _parse_complex(args.alpha, "--alpha")
    beta = _parse_complex(args.beta, "--beta")
    cut = None
    if args.cut is not None:
        cut = parse_cut(args.cut, phi.subsystem_count)
    report = rank_inequality_check(phi, gamma, alpha, beta, cut, args.seed)
    doc = {"applicable": report.applicable, "holds": report.holds,
           "mode": report.mode, "rank_phi": report.rank_phi,
           "rank_gamma": report.rank_gamma, "rank_psi": report.rank_psi}
    if report.detail:
        doc["detail"] = report.detail
    _emit(doc, args.out)
    return 0 if report.applicable and report.holds else 1


def _cmd_purify(args) -> int:
    rho = io.load_density(args.density)
    pur = purify(rho, args.ref_dim)
    _emit(_state_doc(pur.state), args.out)
    return 0


def _cpairs(values) -> list[list[float]]:
    flat = np.asarray(values, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _state_doc(state: StateTensor) -> dict:
    doc = {"version": io.VERSION, "dims": list(state.dims),
           "amplitudes": _cpairs(state.amplitudes)}
    if state.label is not None:
        doc["label"] = state.label
    return doc


def _as_purification(state: StateTensor, path: str) -> Purification:
    if state.subsystem_count < 2:
        raise InvalidArgs(
            f"{path}: a purification needs a reference subsystem")
    return Purification(state, state.dims[:-1], state.dims[-1])


def _cmd_link(args) -> int:
    first = _as_purification(io.load_state(args.first), args.first)
    second = _as_purification(io.load_state(args.second), args.second)
    u = linking_unitary(first, second)
    d = second.reference_dim
    moved = (second.state.amplitudes.reshape(-1, d) @ u.T
             - first.state.amplitudes.reshape(-1, d))
    _emit({"reference_dim": d,
           "unitary": [_cpairs(row) for row in u],
           "residual": float(np.linalg.norm(moved))},
          args.out)
    return 0


def _cmd_gen(args) -> int:
    if args.fixture is not None:
        if args.fixture == "w":
            state = w_state()
        elif args.fixture == "bell":
            state = bell()
        elif args.fixture.startswith("ghz"):
            try:
                n = int(args.fixture[3:] or 3)
            except ValueError:
                raise InvalidArgs(f"unknown fixture {args.fixture!r}") from None
            state = ghz(n)
        else:
            raise InvalidArgs(f"unknown fixture {args.fixture!r}")
    elif args.dims is not None:
        dims = _parse_ints(args.dims, "--dims")
        if args.rank is not None:
            state = random_decomposable_state(dims, args.rank, args.seed)
        else:
            state = haar_random_state(dims, args.seed)
    else:
        raise InvalidArgs("gen needs --fixture or --dims")
    if args.label is not None:
        state = StateTensor(state.dims, state.amplitudes, args.label)
    _emit(_state_doc(state), args.out)
    return 0


def _add_tolerance_flags(sub, orth: bool = True) -> None:
    sub.add_argument("--tol-rank", type=float, default=None,
                     help="relative cutoff for discarding coefficients")
    sub.add_argument("--tol-diag", type=float, default=None,
                     help="off-diagonal residual bound")
    if orth:
        sub.add_argument("--tol-orth", type=float, default=None,
                         help="orthonormality residual bound")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schmidtkit",
        description="Schmidt decomposability toolkit for pure multipartite states")
    subs = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, help_text):
        sub = subs.add_parser(name, help=help_text)
        sub.set_defaults(func=func)
        sub.add_argument("--out", default=None, help="also write the report here")
        sub.add_argument("--seed", type=int, default=0)
        return sub

    sub = add("check", _cmd_check, "decide joint decomposability of a state file")
    sub.add_argument("state")
    _add_tolerance_flags(sub)

    sub = add("decompose", _cmd_decompose,
              "compute a decomposition (joint, or across --cut)")
    sub.add_argument("state")
    sub.add_argument("--cut", default=None)
    _add_tolerance_flags(sub)

    sub = add("number", _cmd_number, "Schmidt number across a cut")
    sub.add_argument("state")
    sub.add_argument("--cut", required=True)
    sub.add_argument("--tol-rank", type=float, default=None)

    sub = add("spectra", _cmd_spectra,
              "reduced spectrum (or --equal for the all-cuts comparison)")
    sub.add_argument("state")
    sub.add_argument("--cut", default=None)
    sub.add_argument("--equal", action="store_true")

    sub = add("partition", _cmd_partition,
              "best bipartition of given dimensions (optional --target)")
    sub.add_argument("--dims", required=True)
    sub.add_argument("--target", type=int, default=None)

    sub = add("compose", _cmd_compose,
              "tensor two decomposition files under --grouping")
    sub.add_argument("left")
    sub.add_argument("right")
    sub.add_argument("--grouping", required=True)

    sub = add("inequality", _cmd_inequality,
              "rank inequality for alpha*phi + beta*gamma")
    sub.add_argument("phi")
    sub.add_argument("gamma")
    sub.add_argument("--alpha", required=True)
    sub.add_argument("--beta", required=True)
    sub.add_argument("--cut", default=None)

    sub = add("purify", _cmd_purify, "purify a density-matrix file")
    sub.add_argument("density")
    sub.add_argument("--ref-dim", type=int, default=None)

    sub = add("link", _cmd_link,
              "reference-side unitary linking two purification files")
    sub.add_argument("first")
    sub.add_argument("second")

    sub = add("gen", _cmd_gen, "write fixture or seeded random state files")
    sub.add_argument("--fixture", default=None,
                     help="w, bell, ghz or ghzN for N parts")
    sub.add_argument("--dims", default=None)
    sub.add_argument("--rank", type=int, default=None)
    sub.add_argument("--label", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except SchmidtError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
