"""Command-line front end: reproducible experiments with JSON (or CSV) output.

Exit status is 0 on success, 1 on invalid input and 2 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import ConsistencyError, __version__
from . import angles as angles_mod
from . import bounds, hecke, plancherel_mc, qexpansion, selberg, traceformula


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


@dataclass
class RunConfig:
    subcommand: str
    k: int | None = None
    k_range: str | None = None
    N: int = 1
    n: int | None = None
    p: int | None = None
    m: int | None = None
    m_max: int | None = None
    M: int | None = None
    a: str | None = None
    b: str | None = None
    delta: str | None = None
    dim: float | None = None
    dims: str | None = None
    trials: int | None = None
    seed: int = 0
    prime_budget: int = hecke.DEFAULT_PRIME_BUDGET
    prec: int | None = None
    tolerance_bits: int = 64
    check: bool = False
    format: str = "json"
    output: str | None = None
    csv: str | None = None
    flags: tuple = ()

    def validate(self):
        sc = self.subcommand
        if self.k is not None and (self.k < 0 or self.k % 2):
            raise UsageError(f"--k must be a non-negative even integer, got {self.k}")
        if self.p is not None and not hecke.is_prime(self.p):
            raise UsageError(f"--p must be prime, got {self.p}")
        if self.N < 1:
            raise UsageError("--N must be positive")
        if self.tolerance_bits < 1:
            raise UsageError("--tolerance-bits must be positive")
        if self.prime_budget < 1:
            raise UsageError("--prime-budget must be positive")
        if sc in ("angles", "moments", "trace") and self.k is not None and self.k < 4:
            raise UsageError("--k must be at least 4")
        if sc == "trace" and (self.n is None or self.n < 1):
            raise UsageError("--n must be a positive integer")
        if sc == "hecke" and (self.n is None or self.n < 1):
            raise UsageError("--n must be a positive integer")
        if sc == "basis" and self.prec is not None and self.prec < 1:
            raise UsageError("--prec must be positive")
        if sc == "maeda":
            parse_k_range(self.k_range)
        if sc == "moments" and (self.m_max is None or self.m_max < 1):
            raise UsageError("--m-max must be positive")
        if sc == "selberg":
            a, b = parse_rational(self.a, "--a"), parse_rational(self.b, "--b")
            if not (Fraction(-1, 2) <= a < b <= Fraction(1, 2)):
                raise UsageError("need -1/2 <= a < b <= 1/2")
            if self.M is None or self.M < 1:
                raise UsageError("--M must be positive")
        if sc == "bound":
            if self.k < 2:
                raise UsageError("--k must be at least 2")
            if self.k * self.N < 3:
                raise UsageError("need kN >= 3")
            if self.N % self.p == 0:
                raise UsageError("--p must not divide --N")
            if self.M is not None and self.M < 1:
                raise UsageError("--M must be positive")
            if self.delta is not None:
                d = parse_rational(self.delta, "--delta")
                if not 0 < d <= Fraction(1, 2):
                    raise UsageError("--delta must lie in (0, 1/2]")
            if self.dim is not None and self.dim < 0:
                raise UsageError("--dim must be non-negative")
        if sc == "mc":
            dims = parse_dims(self.dims)
            if len(dims) < 2 or any(b <= a for a, b in zip(dims, dims[1:])) or dims[0] < 10:
                raise UsageError("--dims must be strictly increasing, each >= 10")
            if self.trials < 100:
                raise UsageError("--trials must be at least 100")
            if self.m < 1:
                raise UsageError("--m must be positive")
            if not 0 <= self.seed < 2**64:
                raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.format == "csv" and sc not in ("maeda", "moments", "mc"):
            raise UsageError(f"csv output is not available for {sc}")


def parse_rational(s, flag="value"):
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise UsageError(f"{flag} must be a rational number such as 1/10, got {s!r}") from None


def parse_k_range(s):
    try:
        lo, hi = (int(x) for x in s.split(":"))
    except (AttributeError, ValueError):
        raise UsageError(f"--k-range must look like lo:hi, got {s!r}") from None
    if lo > hi or lo < 0:
        raise UsageError("--k-range needs 0 <= lo <= hi")
    # odd weights are skipped: S_k(1) = 0 for odd k
    return [k for k in range(lo, hi + 1) if k % 2 == 0]


def parse_dims(s):
    try:
        return [int(x) for x in s.split(",")]
    except (AttributeError, ValueError):
        raise UsageError(f"--dims must be a comma-separated list of integers, got {s!r}") from None


def _clean(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.15g}")
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dumps(obj):
    return json.dumps(_clean(obj), separators=(",", ":"))


def _envelope(cfg, body):
    out = dict(body)
    out["version"] = __version__
    given = set(cfg.flags) | {"subcommand"}
    out["config"] = {k: v for k, v in asdict(cfg).items() if k in given and k not in ("flags", "output")}
    return out


# ---------------------------------------------------------------- subcommands


def cmd_basis(cfg):
    d = qexpansion.cusp_dimension(cfg.k)
    prec = cfg.prec if cfg.prec is not None else d + 1
    B = qexpansion.miller_basis(cfg.k, prec)
    return [_envelope(cfg, {"k": cfg.k, "dim": B.dim, "prec": prec, "forms": [f.to_json() for f in B.forms]})]


def cmd_hecke(cfg):
    M = hecke.hecke_matrix(cfg.k, cfg.n)
    cp = hecke.charpoly(M)
    if any(any(row) for row in hecke.cayley_hamilton_residual(M, cp)):
        raise ConsistencyError("Cayley-Hamilton check failed")
    return [
        _envelope(
            cfg,
            {
                "k": cfg.k,
                "n": cfg.n,
                "dim": M.dim,
                "matrix": M.to_json(),
                "trace": str(M.trace()),
                "charpoly": cp.to_json(),
            },
        )
    ]


def cmd_maeda(cfg):
    rows = []
    for k in parse_k_range(cfg.k_range):
        rep = hecke.pair_count_report(k, cfg.p, cfg.prime_budget)
        rows.append(
            {
                "k": k,
                "dim": rep.dim,
                "squarefree": rep.squarefree,
                "irreducible": rep.irreducible,
                "pair_count": rep.pair_count,
                "sn_galois": rep.sn_galois,
                "witnesses": rep.witnesses,
            }
        )
    return rows


def cmd_angles(cfg):
    A = angles_mod.angle_set(cfg.k, cfg.p, Fraction(1, 2**cfg.tolerance_bits))
    return [_envelope(cfg, A.to_json())]


def cmd_trace(cfg):
    return [_envelope(cfg, {"k": cfg.k, "n": cfg.n, "trace": str(traceformula.trace(cfg.k, cfg.n))})]


def cmd_moments(cfg):
    A = angles_mod.angle_set(cfg.k, cfg.p)
    dim = A.dim
    rows = []
    for m in range(0, cfg.m_max + 1):
        emp = angles_mod.empirical_moment(A, m, zero_is_dim=True)
        tf = traceformula.moment_sum(cfg.k, cfg.p, m)
        cm = bounds.c_coeff(cfg.p, m)
        row = {
            "m": m,
            "empirical": emp,
            "trace_formula": tf,
            "c_m": str(cm),
            "c_m_dim": float(cm * dim),
            "deviation": abs(tf - float(cm * dim)),
        }
        if m >= 1:
            row["lemma1"] = bounds.lemma1_bound(cfg.k, 1, cfg.p, m)
            row["alt"] = bounds.alt_bound(cfg.k, 1, cfg.p, m)
        rows.append(row)
    return rows


def cmd_selberg(cfg):
    S = selberg.build_majorant(parse_rational(cfg.a), parse_rational(cfg.b), cfg.M)
    body = S.to_json()
    if cfg.check:
        verdict = selberg.check_properties(S)
        body["check"] = verdict
        if not (verdict["majorization_ok"] and verdict["mean_ok"] and verdict["coefficient_ok"]):
            raise ConsistencyError(f"majorant properties violated: {verdict}")
    return [_envelope(cfg, body)]


def cmd_bound(cfg):
    delta = parse_rational(cfg.delta) if cfg.delta is not None else None
    rep = bounds.bound_report(cfg.k, cfg.N, cfg.p, dim=cfg.dim, M=cfg.M, delta=delta)
    if rep.rhs is not None and rep.rhs < rep.pair_count_exact - 1e-9:
        raise ConsistencyError("key estimate fell below the exact pair count")
    return [_envelope(cfg, rep.to_dict())]


def cmd_mc(cfg):
    res = plancherel_mc.deviation_scaling(cfg.p, parse_dims(cfg.dims), cfg.trials, cfg.m, cfg.seed)
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["dim", "trial", "deviation"])
            for D, devs in res.deviations.items():
                for t, x in enumerate(devs):
                    w.writerow([D, t, f"{x:.15g}"])
    if cfg.format == "csv":
        return res.per_dim
    return [_envelope(cfg, res.to_json())]


COMMANDS = {
    "basis": cmd_basis,
    "hecke": cmd_hecke,
    "maeda": cmd_maeda,
    "angles": cmd_angles,
    "trace": cmd_trace,
    "moments": cmd_moments,
    "selberg": cmd_selberg,
    "bound": cmd_bound,
    "mc": cmd_mc,
}

# subcommands whose rows stream as JSON lines after a header
_TABULAR = {"maeda", "moments"}


def build_parser():
    parser = _Parser(prog="heckepairs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"heckepairs {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--output", help="write the report here instead of standard output")
        return sp

    sp = common(sub.add_parser("basis", help="Miller basis of S_k(1)"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--prec", type=int)

    sp = common(sub.add_parser("hecke", help="matrix and characteristic polynomial of T_n"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, default=2)

    sp = common(sub.add_parser("maeda", help="squarefree/irreducible/S_d checks across weights"))
    sp.add_argument("--k-range", required=True, help="lo:hi inclusive; odd weights are skipped")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--prime-budget", type=int, default=hecke.DEFAULT_PRIME_BUDGET)

    sp = common(sub.add_parser("angles", help="certified eigenvalues and angles of T_p"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--tolerance-bits", type=int, default=64, help="isolating intervals of width 2^-bits")

    sp = common(sub.add_parser("trace", help="trace of T_n from the trace formula"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = common(sub.add_parser("moments", help="cosine moments: angles vs trace formula vs bounds"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m-max", type=int, default=10)

    sp = common(sub.add_parser("selberg", help="Selberg majorant coefficients"))
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--check", action="store_true", help="verify majorization, mean and coefficient bounds")

    sp = common(sub.add_parser("bound", help="full bound report for (k, N, p)"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--dim", type=float)
    sp.add_argument("--M", type=int)
    sp.add_argument("--delta")

    sp = common(sub.add_parser("mc", help="Monte Carlo scaling of moment deviations"))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--dims", default="100,1000,10000")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", help="also write raw per-trial deviations to this CSV file")
    return parser


def _render(cfg, rows):
    if cfg.format == "csv":
        buf = io.StringIO()
        cleaned = [_clean(r) for r in rows]
        fields = list(dict.fromkeys(k for r in cleaned for k in r))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in cleaned:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        return buf.getvalue()
    if cfg.subcommand in _TABULAR:
        header = _envelope(cfg, {"rows": len(rows)})
        return "".join(_dumps(r) + "\n" for r in [header] + rows)
    return "".join(_dumps(r) + "\n" for r in rows)


def run(cfg):
    """Execute one configuration; returns (exit status, text)."""
    try:
        cfg.validate()
        rows = COMMANDS[cfg.subcommand](cfg)
    except ConsistencyError as exc:
        return 2, f"internal consistency failure: {exc}\n"
    except ValueError as exc:
        return 1, f"error: {exc}\n"
    return 0, _render(cfg, rows)


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    args = vars(ns)
    cfg = RunConfig(**args, flags=tuple(args))
    status, text = run(cfg)
    if status:
        sys.stderr.write(text)
        if status == 1:
            parser.print_usage(sys.stderr)
        return status
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
