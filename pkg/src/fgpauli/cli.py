"""Command-line entry point: ``fgpauli <command> [options]``.

Commands: element, table, signs, verify, algebra, probability. Exit codes
are 0 on success, 1 on usage errors and otherwise taken from the
exception classes in :mod:`fgpauli.errors`.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import lie
from .elements import BASIS_ANGLES, SpinConfiguration, diagonal_probability, element_pauli
from .errors import FGPauliError, ValidationError, VerificationError
from .gaussian import (GENERIC, KINDS, MIXED, GaussianSpec, decompose, random_spec, spec_from_json,
                       validate)
from .oracle import build_gaussian, correlation_oracle, rotated_operator, spins_to_index
from .signs import (MAX_ENUM_L, SignPair, canonical_pair, enumerate_pairs, validate_pair)

DEFAULT_TOL = 1e-8
MAX_TABLE_L = 7
MAX_VERIFY_L = 6

Angles = tuple[tuple[float, float, float], ...]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit with 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- input parsing ----------------------------------------------------------

def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def parse_spins(text: str) -> tuple[int, ...]:
    """``"+-+"`` (site 1 leftmost) to ``(1, -1, 1)``; ``-`` and ``−`` both mean down."""
    out = []
    for ch in text:
        if ch == "+":
            out.append(1)
        elif ch in "-−":
            out.append(-1)
        else:
            raise ValidationError(f"spin strings use '+' and '-', got {ch!r}")
    return tuple(out)


def format_spins(spins: Sequence[int]) -> str:
    return "".join("+" if s == 1 else "-" for s in spins)


def _site_angles(entry: Any) -> tuple[float, float, float]:
    if isinstance(entry, str):
        key = entry.strip().lower()
        if key in BASIS_ANGLES:
            return BASIS_ANGLES[key]
        parts = key.split(":")
        if len(parts) != 3:
            raise ValidationError(f"basis entries are x|y|z or phi:theta:alpha, got {entry!r}")
        try:
            return tuple(float(x) for x in parts)  # type: ignore[return-value]
        except ValueError as exc:
            raise ValidationError(f"bad angle triple {entry!r}") from exc
    if isinstance(entry, dict):
        try:
            return (float(entry.get("phi", 0.0)), float(entry.get("theta", 0.0)),
                    float(entry.get("alpha", 0.0)))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad site angles {entry!r}") from exc
    if isinstance(entry, (list, tuple)) and len(entry) == 3:
        return tuple(float(x) for x in entry)  # type: ignore[return-value]
    raise ValidationError(f"cannot read site basis {entry!r}")


def parse_basis(arg: str | None, L: int) -> Angles:
    """Angles from a basis file, an inline list, or a single letter for all sites.

    A file holds ``{"sites": [...]}`` and optionally ``"ket_sites"`` for a
    ket basis that differs from the bra basis. Inline lists are comma
    separated; ``bra|ket`` gives the two sides separately.
    """
    if arg is None:
        return (BASIS_ANGLES["z"],) * L
    if os.path.isfile(arg):
        data = _read_json(arg)
        if isinstance(data, list):
            data = {"sites": data}
        bra = [_site_angles(e) for e in data.get("sites", [])]
        ket = [_site_angles(e) for e in data["ket_sites"]] if "ket_sites" in data else None
    else:
        sides = arg.split("|")
        if len(sides) > 2:
            raise ValidationError("inline basis takes at most one '|'")

        def side(text: str) -> list[tuple[float, float, float]]:
            items = [t for t in text.split(",") if t.strip()]
            if len(items) == 1 and items[0].strip().lower() in BASIS_ANGLES:
                return [_site_angles(items[0])] * L
            return [_site_angles(t) for t in items]

        bra = side(sides[0])
        ket = side(sides[1]) if len(sides) == 2 else None
    for name, lst in (("bra", bra), ("ket", ket)):
        if lst is not None and len(lst) != L:
            raise ValidationError(f"{name} basis has {len(lst)} sites, spec has L={L}")
    return tuple(bra) + (tuple(ket) if ket is not None else ())


def load_spec(args: argparse.Namespace) -> GaussianSpec:
    if args.spec:
        spec = spec_from_json(_read_json(args.spec))
    else:
        if args.L is None:
            raise ValidationError("give --spec or --L (random seeded spec)")
        spec = random_spec(args.L, kind=args.kind, rng=args.seed)
    diag = validate(spec)
    if not diag:
        raise ValidationError(f"spec violates its constraints: {diag.details}")
    return spec


def load_pair(arg: str | None, L: int) -> SignPair:
    """Canonical pair, an index into the enumeration, or a pair JSON file."""
    if arg is None or arg == "canonical":
        return canonical_pair(L)
    if arg.isdigit():
        pairs = enumerate_pairs(L)
        i = int(arg)
        if i >= len(pairs):
            raise ValidationError(f"pair index {i} out of range ({len(pairs)} pairs)")
        return pairs[i]
    data = _read_json(arg)
    pair = SignPair.from_json(data)
    if pair.L != L:
        raise ValidationError(f"pair is for L={pair.L}, spec has L={L}")
    return pair


def _pair_id(arg: str | None) -> str:
    if arg is None or arg == "canonical":
        return "canonical"
    return f"#{arg}" if arg.isdigit() else os.path.basename(arg)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GP_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Iterable) -> list:
    """Ordered map over a thread pool capped by ``GP_THREADS``."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _cx(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- commands ---------------------------------------------------------------

def cmd_element(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    if args.bra is None or args.ket is None:
        raise ValidationError("element needs --bra and --ket")
    bra, ket = parse_spins(args.bra), parse_spins(args.ket)
    if len(bra) != spec.L or len(ket) != spec.L:
        raise ValidationError(f"spin strings must have length L={spec.L}")
    angles = parse_basis(args.basis, spec.L)
    pair = load_pair(args.pair, spec.L)
    bd = decompose(spec)
    value = element_pauli(bd, pair, SpinConfiguration(bra, ket, angles))
    _emit(args, _dump({
        "bra": format_spins(bra), "ket": format_spins(ket), "value": _cx(value),
        "spec_hash": spec.digest(), "pair": _pair_id(args.pair), "tol": args.tol,
    }))
    return 0


def _labels(L: int) -> list[tuple[str, tuple[int, ...]]]:
    out = []
    for bits in itertools.product("01", repeat=L):
        label = "".join(bits)
        out.append((label, tuple(1 if b == "1" else -1 for b in bits)))
    return out


def element_table(spec: GaussianSpec, angles: Angles, pair: SignPair) -> np.ndarray:
    """All ``4^L`` elements, rows and columns in binary label order (1 = up)."""
    bd = decompose(spec)
    labels = _labels(spec.L)

    def row(b: tuple[str, tuple[int, ...]]) -> list[complex]:
        return [element_pauli(bd, pair, SpinConfiguration(b[1], k[1], angles)) for k in labels]

    return np.array(_pmap(row, labels), dtype=complex).reshape(len(labels), len(labels))


def cmd_table(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    if spec.L > MAX_TABLE_L:
        raise ValidationError(f"table is limited to L <= {MAX_TABLE_L}")
    angles = parse_basis(args.basis, spec.L)
    pair = load_pair(args.pair, spec.L)
    T = element_table(spec, angles, pair)
    labels = [lab for lab, _ in _labels(spec.L)]
    herm = None
    if spec.kind == MIXED:
        herm = float(np.max(np.abs(T - T.conj().T))) if T.size else 0.0
    if args.format == "json":
        obj: dict[str, Any] = {
            "spec_hash": spec.digest(), "pair": _pair_id(args.pair), "labels": labels,
            "values": [[_cx(z) for z in r] for r in T],
        }
        if herm is not None:
            obj["hermitian"] = herm <= args.tol
            obj["hermitian_dev"] = herm
        _emit(args, _dump(obj))
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bra"] + [f"{k}.{part}" for k in labels for part in ("re", "im")])
    for lab, r in zip(labels, T):
        w.writerow([lab] + [repr(float(x)) for z in r for x in (z.real, z.imag)])
    if herm is not None:
        w.writerow(["# hermitian", "true" if herm <= args.tol else "false", repr(herm)])
    _emit(args, buf.getvalue())
    return 0


def cmd_signs(args: argparse.Namespace) -> int:
    L = args.L
    if L is None:
        raise ValidationError("signs needs --L")
    if not 1 <= L <= MAX_ENUM_L:
        raise ValidationError(f"enumeration supports 1 <= L <= {MAX_ENUM_L}")
    pairs = enumerate_pairs(L)
    out = []
    failed = []
    rng = np.random.default_rng(args.seed)
    spec = random_spec(L, rng=rng) if args.check else None
    for pair in pairs:
        entry = pair.to_json()
        entry["label"] = pair.label
        if args.check:
            diag = validate_pair(pair, spec, trials=args.trials, rng=args.seed, tol=args.tol)
            entry["valid"] = diag.passed
            entry["functional_max_dev"] = diag.details["functional_max_dev"]
            if not diag:
                failed.append(pair.label)
        out.append(entry)
    _emit(args, _dump({"L": L, "count": len(out), "expected": 2 ** (2 * L - 1), "pairs": out}))
    if failed:
        raise VerificationError(f"pairs failed validation: {failed}")
    return 0


def _random_angles(rng: np.random.Generator, L: int) -> Angles:
    a = rng.uniform(0.0, 2 * np.pi, size=(L, 3))
    return tuple(tuple(float(x) for x in row) for row in a)


def verify_run(L: int, n_specs: int, seed: int, kind: str = GENERIC, basis: str | None = None,
               trials: int | None = None, pair: SignPair | None = None,
               tol: float = DEFAULT_TOL) -> dict[str, Any]:
    """Compare formula elements against the dense oracle on seeded random specs.

    ``basis`` is None/"z" (sigma^z), "random" (fresh random angles per
    spec) or anything :func:`parse_basis` accepts. Deviations are scaled by
    ``max(1, max |oracle entry|)`` of the spec.
    """
    if not 1 <= L <= MAX_VERIFY_L:
        raise ValidationError(f"verify supports 1 <= L <= {MAX_VERIFY_L}")
    rng = np.random.default_rng(seed)
    pair = canonical_pair(L) if pair is None else pair
    labels = [s for _, s in _labels(L)]
    configs = [(b, k) for b in labels for k in labels]

    def one(spec_rng: np.random.Generator) -> dict[str, Any]:
        spec = random_spec(L, kind=kind, rng=spec_rng)
        if basis == "random":
            angles: Angles = _random_angles(spec_rng, L)
        else:
            angles = parse_basis(basis, L)
        chosen = configs
        if trials is not None and trials < len(configs):
            idx = spec_rng.choice(len(configs), size=trials, replace=False)
            chosen = [configs[i] for i in sorted(idx)]
        bd = decompose(spec)
        R = rotated_operator(spec, angles, build_gaussian(spec))
        scale = max(1.0, float(np.max(np.abs(R))))
        worst, where = 0.0, None
        for bra, ket in chosen:
            a = element_pauli(bd, pair, SpinConfiguration(bra, ket, angles))
            b = complex(R[spins_to_index(bra), spins_to_index(ket)])
            dev = abs(a - b) / scale
            if dev > worst or where is None:
                worst = max(worst, dev)
                where = {"spec_hash": spec.digest(), "bra": format_spins(bra),
                         "ket": format_spins(ket), "formula": _cx(a), "oracle": _cx(b)}
        return {"max_dev": worst, "worst": where, "elements": len(chosen)}

    seeds = rng.spawn(n_specs)
    results = _pmap(one, seeds)
    worst = max(results, key=lambda r: r["max_dev"])
    max_dev = worst["max_dev"]
    return {
        "L": L, "kind": kind, "basis": basis or "z", "specs": n_specs,
        "elements": sum(r["elements"] for r in results), "max_dev": max_dev, "tol": tol,
        "passed": bool(max_dev <= tol), "worst": worst["worst"],
    }


def cmd_verify(args: argparse.Namespace) -> int:
    L = args.L if args.L is not None else 2
    pair = load_pair(args.pair, L) if args.pair else None
    report = verify_run(L, args.specs, args.seed, args.kind, args.basis, args.trials, pair, args.tol)
    _emit(args, _dump(report))
    if not report["passed"]:
        raise VerificationError(f"max deviation {report['max_dev']:.3e} exceeds {args.tol:g}")
    return 0


def algebra_report(L: int, tol: float = 1e-10) -> dict[str, Any]:
    """Closure dimension, spectrum, centralizer, root overlaps and the L=2 table."""
    if not 1 <= L <= lie.MAX_FRAME_L:
        raise ValidationError(f"algebra supports 1 <= L <= {lie.MAX_FRAME_L}")
    pair = canonical_pair(L)
    report: dict[str, Any] = {"L": L, "expected": L * (2 * L - 1)}
    checks = []
    if L <= lie.MAX_CLOSURE_L:
        dim = lie.closure_dimension([pair.sigma, pair.sigma_prime])
        report["closure_dim"] = dim
        checks.append(dim == report["expected"])
    else:
        report["closure_dim"] = None
    spec_diag = lie.spectrum_check(pair.sigma, L, pair.p, pair.sign, tol)
    report["spectrum_max_dev"] = spec_diag.max_violation
    g0 = lie.frame_g0(L)
    report["frame_orthogonality_dev"] = float(np.max(np.abs(g0.T @ g0 - np.eye(2 * L))))
    cent = lie.centralizer_check(lie.block_form(lie.omegas(L)), L)
    report["centralizer"] = cent.passed
    checks += [spec_diag.passed, report["frame_orthogonality_dev"] <= 1e-12, cent.passed]
    if L >= 2:
        ov = lie.overlap_check(L, tol)
        report["overlaps"] = [_cx(z) for z in ov.details["overlaps"]]
        report["overlap_min_abs"] = ov.details["min_abs"]
        report["overlap_route_dev"] = ov.max_violation
        checks.append(ov.passed)
    else:
        report["overlaps"] = []
    if L == 2:
        table = lie.l2_commutator_table_check(pair.sigma, pair.sigma_prime, tol)
        report["l2_table"] = table.passed
        report["l2_table_max_dev"] = table.max_violation
        checks.append(table.passed)
    report["passed"] = bool(all(checks))
    return report


def cmd_algebra(args: argparse.Namespace) -> int:
    if args.L is None:
        raise ValidationError("algebra needs --L")
    report = algebra_report(args.L)
    _emit(args, _dump(report))
    if not report["passed"]:
        raise VerificationError("algebra checks failed")
    return 0


def _load_correlation(args: argparse.Namespace) -> np.ndarray:
    if args.corr:
        data = _read_json(args.corr)
        rows = data["G"] if isinstance(data, dict) else data
        G = np.array(rows, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValidationError("G must be a square real matrix")
        return G
    spec = load_spec(args)
    if spec.kind != MIXED:
        raise ValidationError("probability from a spec needs a mixed_hermitian spec")
    G = correlation_oracle(spec)
    if np.max(np.abs(G.imag)) > 1e-9:
        raise ValidationError("correlation matrix is not real for this spec")
    return G.real


def cmd_probability(args: argparse.Namespace) -> int:
    G = _load_correlation(args)
    L = G.shape[0]
    if args.config is not None:
        cfg = parse_spins(args.config)
        if len(cfg) != L:
            raise ValidationError(f"--config must have length L={L}")
        p = diagonal_probability(G, cfg)
        _emit(args, _dump({"config": format_spins(cfg), "probability": p}))
        return 0
    probs = {format_spins(s): diagonal_probability(G, s) for _, s in _labels(L)}
    _emit(args, _dump({"L": L, "probabilities": probs, "sum": math.fsum(probs.values())}))
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fgpauli", description="Gaussian-operator matrix elements in Pauli bases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, spec: bool = True) -> None:
        if spec:
            p.add_argument("--spec", help="spec JSON file ({'L','kind','M'} or {'L','A'})")
            p.add_argument("--kind", choices=KINDS, default=GENERIC,
                           help="kind of random spec when --spec is absent")
        p.add_argument("--L", type=int, help="site count")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("element", help="one matrix element")
    common(p)
    p.add_argument("--basis", help="basis file or inline list (x,y,z or phi:theta:alpha)")
    p.add_argument("--bra", help="bra spins, e.g. '+-+' (site 1 leftmost); use --bra=-+ when it starts with '-'")
    p.add_argument("--ket", help="ket spins")
    p.add_argument("--pair", help="'canonical', an enumeration index, or a pair JSON file")
    p.set_defaults(func=cmd_element)

    p = sub.add_parser("table", help="all 4^L elements")
    common(p)
    p.add_argument("--basis")
    p.add_argument("--pair")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("signs", help="enumerate sign pairs")
    common(p, spec=False)
    p.add_argument("--check", action="store_true", help="validate every pair functionally")
    p.add_argument("--trials", type=int, default=None,
                   help="random configurations per pair (default: all)")
    p.set_defaults(func=cmd_signs)

    p = sub.add_parser("verify", help="formula vs dense oracle on seeded random specs")
    common(p, spec=False)
    p.add_argument("--kind", choices=KINDS, default=GENERIC)
    p.add_argument("--specs", type=int, default=20)
    p.add_argument("--trials", type=int, default=None,
                   help="sampled elements per spec (default: all 4^L)")
    p.add_argument("--basis", help="'random', a basis file, or an inline list")
    p.add_argument("--pair")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("algebra", help="so(2L) checks of the sign matrices")
    common(p, spec=False)
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("probability", help="diagonal probabilities from a correlation matrix")
    common(p)
    p.add_argument("--corr", help="JSON file with {'G': LxL real} or a nested list")
    p.add_argument("--config", help="occupation string, '+' occupied, '-' empty")
    p.set_defaults(func=cmd_probability)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "tol", 1.0) <= 0:
            parser.error("--tol must be positive")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FGPauliError as exc:
        print(f"fgpauli: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OverflowError as exc:
        print(f"fgpauli: overflow: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
