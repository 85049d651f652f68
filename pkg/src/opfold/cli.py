"""Configuration-driven command line front end.

One JSON config in, one deterministic JSON report out (plus optional CSV
tables). Every rational is serialized as a canonical "p/q" string; floats
appear only in fields explicitly named *_float or *_rel. Timings go to
stderr so reports are byte-stable for a fixed config.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from .bispec import (
    conjugation_eval,
    discover_operator,
    discover_scalar,
    min_order_check,
    operator_to_json,
    reference_operator,
    reference_scalar_ladder,
    verify_eigen,
)
from .darboux import (
    band_symmetric_factorize,
    block_lu,
    darboux_swap,
    reference_sum_product,
    reference_zeta,
    verify_h_factorization,
    verify_ul_identity,
    w_interlace_check,
)
from .errors import ConfigError, OpfoldError
from .linalg import Matrix
from .matfold import (
    apply_similarity,
    build_matrix_sequence,
    leading_orthonormal_sq,
    matrix_ttrr,
    monic_normalize,
    orthonormal_blocks,
    reference_block_ttrr,
    similarity_from_block,
)
from .measures import (
    MomentFunctional,
    SobolevSpec,
    christoffel_shift,
    hermite_moments,
    laguerre_moments,
    measure_form,
    sobolev_form,
)
from .orthopoly import (
    banded_recurrence,
    connection_matrix,
    jacobi_matrix,
    monic_sequence,
    reference_abc,
)
from .rationals import as_fraction, rat_str

__all__ = ["RunConfig", "run", "emit_tables", "main", "TASK_NAMES"]

TASK_NAMES = (
    "moments",
    "gram",
    "orthopoly",
    "recurrence",
    "connection",
    "darboux",
    "fold",
    "ttrr",
    "bispec-verify",
    "bispec-discover",
    "min-order",
    "conjugation",
)

_DEPS = {
    "moments": (),
    "gram": ("moments",),
    "orthopoly": ("gram",),
    "recurrence": ("orthopoly",),
    "connection": ("orthopoly",),
    "darboux": ("recurrence", "fold"),
    "fold": ("orthopoly",),
    "ttrr": ("fold", "recurrence"),
    "bispec-verify": ("fold",),
    "bispec-discover": ("fold",),
    "min-order": ("fold",),
    "conjugation": ("orthopoly",),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters.

    n_max is the highest block index for folded tasks; the scalar
    sequence is sized to (N+1)(n_max+1) members when any matrix task
    needs it, and to n_max+1 otherwise.
    """

    measure_type: str
    alpha: int
    moments: Optional[tuple[Fraction, ...]]
    c: Fraction
    N: int
    M: Matrix
    n_max: int
    tasks: tuple[str, ...]
    output: Optional[str]
    float_tolerance: float
    float_tolerance_str: str

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        measure = data.get("measure")
        if not isinstance(measure, dict) or "type" not in measure:
            raise ConfigError("config needs a measure block with a type")
        mtype = measure["type"]
        if mtype not in ("laguerre", "hermite", "moments"):
            raise ConfigError(f"unknown measure type {mtype!r}")
        alpha = measure.get("alpha", 0)
        if mtype == "laguerre" and (not isinstance(alpha, int) or alpha < 0):
            raise ConfigError("laguerre alpha must be a nonnegative integer")
        raw_moments = None
        if mtype == "moments":
            try:
                raw_moments = tuple(as_fraction(v) for v in measure["moments"])
            except (KeyError, ValueError, TypeError) as exc:
                raise ConfigError(f"bad explicit moments: {exc}") from exc
        try:
            c = as_fraction(data.get("c", "0"))
        except ValueError as exc:
            raise ConfigError(f"bad shift c: {exc}") from exc
        N = data.get("N", 1)
        if not isinstance(N, int) or N < 0:
            raise ConfigError("N must be a nonnegative integer")
        mrows = data.get("M")
        if mrows is None:
            raise ConfigError("config needs the mass matrix M")
        try:
            M = Matrix.rational(mrows)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad mass matrix M: {exc}") from exc
        if M.shape != (N + 1, N + 1):
            raise ConfigError(f"M must be {N + 1}x{N + 1}, got {M.shape}")
        if M != M.transpose():
            raise ConfigError("mass matrix M must be symmetric")
        n_max = data.get("n_max", 10)
        if not isinstance(n_max, int) or n_max < 2:
            raise ConfigError("n_max must be an integer >= 2")
        tasks = data.get("tasks", ["all"])
        if not isinstance(tasks, list) or not tasks:
            raise ConfigError("tasks must be a nonempty list")
        expanded: list[str] = []
        for t in tasks:
            if t == "all":
                expanded.extend(TASK_NAMES)
            elif t in TASK_NAMES:
                expanded.append(t)
            else:
                raise ConfigError(f"unknown task {t!r}")
        tol_str = data.get("float_tolerance", "1e-10")
        try:
            tol = float(tol_str)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad float_tolerance: {exc}") from exc
        if tol <= 0:
            raise ConfigError("float_tolerance must be positive")
        return cls(
            mtype,
            alpha if isinstance(alpha, int) else 0,
            raw_moments,
            c,
            N,
            M,
            n_max,
            tuple(dict.fromkeys(expanded)),
            data.get("output"),
            tol,
            str(tol_str),
        )

    def resolved_tasks(self) -> tuple[str, ...]:
        wanted: set[str] = set()

        def pull(t: str):
            if t in wanted:
                return
            wanted.add(t)
            for d in _DEPS[t]:
                pull(d)

        for t in self.tasks:
            pull(t)
        return tuple(t for t in TASK_NAMES if t in wanted)

    def is_canonical(self) -> bool:
        return (
            self.measure_type == "laguerre"
            and self.alpha == 0
            and self.c == 0
            and self.N == 1
            and self.M == Matrix.rational([[0, 0], [0, 1]])
        )

    def echo(self) -> dict:
        out = {
            "measure": {"type": self.measure_type},
            "c": rat_str(self.c),
            "N": self.N,
            "M": [[rat_str(v) for v in row] for row in self.M.rows],
            "n_max": self.n_max,
            "tasks": list(self.tasks),
            "float_tolerance": self.float_tolerance_str,
        }
        if self.measure_type == "laguerre":
            out["measure"]["alpha"] = self.alpha
        if self.moments is not None:
            out["measure"]["moments"] = [rat_str(v) for v in self.moments]
        return out


def _mats_json(m: Matrix) -> list:
    return [[rat_str(v) for v in row] for row in m.rows]


def _poly_json(p) -> list:
    return [rat_str(p.coeff(k)) for k in range(p.degree + 1)] or ["0"]


def _sig_json(entry) -> dict:
    return {"sq": rat_str(entry.sq), "sign": entry.sign}


class _Context:
    """Shared artifacts across tasks, built lazily but deterministically."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.cache: dict[str, object] = {}

    def scalar_count(self) -> int:
        cfg = self.cfg
        matrix_tasks = {
            "darboux",
            "fold",
            "ttrr",
            "bispec-verify",
            "bispec-discover",
            "min-order",
            "conjugation",
        }
        if matrix_tasks & set(cfg.resolved_tasks()):
            return (cfg.N + 1) * (cfg.n_max + 1)
        return cfg.n_max + 1

    def get(self, key: str, build: Callable[[], object]):
        if key not in self.cache:
            self.cache[key] = build()
        return self.cache[key]

    # ----- shared builders -----
    def moments(self) -> MomentFunctional:
        cfg = self.cfg
        count = 2 * (self.scalar_count() + cfg.N + 2) + 2

        def build():
            if cfg.measure_type == "laguerre":
                return laguerre_moments(cfg.alpha, count)
            if cfg.measure_type == "hermite":
                return hermite_moments(count)
            if cfg.moments is None or len(cfg.moments) < count:
                raise ConfigError(
                    f"explicit moments: need at least {count}, have "
                    f"{0 if cfg.moments is None else len(cfg.moments)}"
                )
            return MomentFunctional(cfg.moments[:count])

        return self.get("moments", build)

    def form(self):
        cfg = self.cfg
        return self.get(
            "form",
            lambda: sobolev_form(SobolevSpec(self.moments(), cfg.c, cfg.N, cfg.M)),
        )

    def seq(self):
        return self.get(
            "seq", lambda: monic_sequence(self.form(), self.scalar_count() - 1)
        )

    def rec(self):
        cfg = self.cfg
        return self.get("rec", lambda: banded_recurrence(self.seq(), cfg.c, cfg.N))

    def shifted_seq(self):
        cfg = self.cfg
        return self.get(
            "shifted",
            lambda: monic_sequence(
                measure_form(christoffel_shift(self.moments(), cfg.c, cfg.N + 1)),
                self.scalar_count() - 1,
                require_positive=False,
            ),
        )

    def fold(self):
        cfg = self.cfg
        return self.get("fold", lambda: build_matrix_sequence(self.seq(), cfg.N))


# ----- task implementations ---------------------------------------------


def _task_moments(ctx: _Context) -> tuple[str, dict]:
    mom = ctx.moments()
    count = 2 * ctx.cfg.n_max + 2
    return "PASS", {
        "count": count,
        "values": [rat_str(mom.moment(k)) for k in range(count)],
    }


def _task_gram(ctx: _Context) -> tuple[str, dict]:
    from .measures import gram_matrix

    degree = min(ctx.cfg.n_max, 12)
    g = gram_matrix(ctx.form(), degree)
    sym = g == g.transpose()
    status = "PASS" if sym else "FAIL"
    return status, {
        "degree": degree,
        "symmetric": sym,
        "entries": _mats_json(g),
    }


def _task_orthopoly(ctx: _Context) -> tuple[str, dict]:
    seq = ctx.seq()
    count = min(len(seq), ctx.cfg.n_max + 1)
    return "PASS", {
        "count": count,
        "norms_sq": [rat_str(seq.norm_sq(n)) for n in range(count)],
        "polys": [_poly_json(seq.poly(n)) for n in range(count)],
        "positive": seq.is_positive,
    }


def _task_recurrence(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    rec = ctx.rec()
    count = max(0, rec.size - (cfg.N + 2))
    rows = []
    ref_ok = True
    for n in range(count):
        entry = {
            "n": n,
            "diag": rat_str(rec.raw.entry(n, n) / rec.norms_sq[n]),
        }
        for off in range(1, cfg.N + 2):
            if n + off < rec.size:
                entry[f"off{off}_sq"] = rat_str(rec.orthonormal_sq(n, n + off))
                entry[f"off{off}_sign"] = rec.orthonormal_sign(n, n + off)
        rows.append(entry)
    payload: dict = {"bandwidth": cfg.N + 1, "rows": rows}
    if cfg.is_canonical():
        for n in range(min(count, 21)):
            a2, b2, cdiag = reference_abc(n)
            if (
                rec.orthonormal_sq(n, n + 2) != a2
                or rec.orthonormal_sq(n, n + 1) != b2
                or rec.raw.entry(n, n) / rec.norms_sq[n] != cdiag
            ):
                ref_ok = False
        payload["reference_match"] = ref_ok
    return ("PASS" if ref_ok else "FAIL"), payload


def _task_connection(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    rec = ctx.rec()
    fact = band_symmetric_factorize(rec.raw, cfg.N + 1, require_positive=False)
    hrep = verify_h_factorization(rec, fact)
    shifted = ctx.shifted_seq()
    conn = connection_matrix(ctx.seq(), shifted, cfg.N)
    jac = jacobi_matrix(shifted)
    ulrep = verify_ul_identity(jac, cfg.c, cfg.N, conn)
    base = monic_sequence(measure_form(ctx.moments()), ctx.scalar_count() - 1)
    conn0 = connection_matrix(base, shifted, cfg.N)
    ulrep0 = verify_ul_identity(jac, cfg.c, cfg.N, conn0)
    same_t = all(
        fact.T_monic.entry(i, j) == conn.T_monic.entry(i, j)
        for i in range(conn.size)
        for j in range(conn.size)
    )
    ok = hrep.exact_ok and same_t
    return ("PASS" if ok else "FAIL"), {
        "h_exact": hrep.exact_ok,
        "h_float_rel": hrep.float_max_rel,
        "h_trusted_rows": hrep.trusted_rows,
        "shift_power_trusted_rows": ulrep.trusted_rows,
        "shift_power_float_rel": ulrep.float_max_rel,
        "base_connection_trusted_rows": ulrep0.trusted_rows,
        "base_connection_float_rel": ulrep0.float_max_rel,
        "factorization_matches_connection": same_t,
    }


def _task_fold(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    R = ctx.fold()
    payload: dict = {"blocks": len(R), "block_size": R.block_size}
    if cfg.is_canonical():
        from .matfold import reference_leading_sq

        ok = True
        for n in range(2, min(len(R), 11)):
            comp = leading_orthonormal_sq(ctx.seq(), cfg.N, n)
            ref = reference_leading_sq(n)
            for i in range(2):
                for j in range(2):
                    if (i, j) == (1, 1):
                        continue
                    if comp[i, j].sq != ref[i, j].sq:
                        ok = False
        payload["leading_display_match_excl_11"] = ok
        payload["leading_display_note"] = (
            "the tabulated leading display's (1,1) entry carries (2n)! where "
            "consistency with its own first column requires (2n+1)!; all "
            "other entries match exactly up to one row sign"
        )
        if not ok:
            return "FAIL", payload
    return "PASS", payload


def _task_darboux(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    R = ctx.fold()
    P = monic_normalize(R).sequence
    blockJ = matrix_ttrr(P).monic
    lu = block_lu(blockJ)
    swap = darboux_swap(lu)
    Q = monic_normalize(build_matrix_sequence(ctx.shifted_seq(), cfg.N)).sequence
    qJ = matrix_ttrr(Q).monic
    m = swap.nblocks
    rows = []
    all_lu, all_ul, all_sum = True, True, True
    z = lu.zetas.zeta
    for n in range(m):
        lu_match = (
            z(2 * n) + z(2 * n + 1) == blockJ.diag[n]
            and (n == 0 or z(2 * n) @ z(2 * n - 1) == blockJ.sub[n - 1])
        )
        ul_match = swap.diag[n] == qJ.diag[n] and (
            n == 0 or swap.sub[n - 1] == qJ.sub[n - 1]
        )
        entry = {"n": n, "lu_match": lu_match, "ul_match": ul_match}
        if cfg.is_canonical():
            if n >= 1:
                ev, od = reference_zeta(n)
                entry["zeta_match"] = z(2 * n - 1) == ev and z(2 * n) == od
                entry["zeta_printed_labels_match"] = (
                    z(2 * n) == ev and z(2 * n - 1) == od
                )
            if 2 * n + 2 < len(lu.zetas):
                s_ref, p_ref = reference_sum_product(n)
                entry["sum_match"] = z(2 * n + 2) + z(2 * n + 1) == s_ref
                entry["product_match"] = z(2 * n + 1) @ z(2 * n) == p_ref
                all_sum = all_sum and entry["sum_match"]
        all_lu = all_lu and lu_match
        all_ul = all_ul and ul_match
        rows.append(entry)
    # interlaced recurrence in the unfolded variable
    count = 2 * len(P) - 2
    checked = w_interlace_check(
        [P.mat(n) for n in range(len(P))],
        [Q.mat(n) for n in range(len(Q))],
        lu.zetas,
        count,
    )
    payload: dict = {
        "blocks": m,
        "rows": rows,
        "interlace_checked_through": checked[-1] if checked else -1,
        "zetas": {
            str(k): _mats_json(z(k)) for k in range(min(len(lu.zetas), 12))
        },
    }
    ok = all_lu and all_ul and (not cfg.is_canonical() or all_sum)
    return ("PASS" if ok else "FAIL"), payload


def _task_ttrr(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    R = ctx.fold()
    rec = ctx.rec()
    P = monic_normalize(R).sequence
    coeffs = matrix_ttrr(P, rec)
    nblocks = coeffs.monic.nblocks
    payload: dict = {
        "blocks": nblocks,
        "monic_diag": [_mats_json(coeffs.monic.diag[n]) for n in range(min(nblocks, 6))],
    }
    status = "PASS"
    if cfg.is_canonical() and coeffs.B:
        eps = similarity_from_block(coeffs.B[0], reference_block_ttrr(0)[1])
        limit = min(len(coeffs.A), len(coeffs.B), 11)
        okA = all(
            apply_similarity(coeffs.A[n], eps) == reference_block_ttrr(n)[0]
            for n in range(limit)
        )
        okB = all(
            apply_similarity(coeffs.B[n], eps) == reference_block_ttrr(n)[1]
            for n in range(limit)
        )
        payload["orthonormal_reference_match"] = okA and okB
        payload["similarity"] = list(eps)
        if not (okA and okB):
            status = "FAIL"
    return status, payload


def _task_bispec_verify(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    if not cfg.is_canonical():
        return "REPORT", {
            "note": "reference operator exists only for the canonical configuration"
        }
    op, ladder = reference_operator()
    limit = min(len(ctx.fold()) - 1, 8)
    rep = verify_eigen(ctx.fold(), op, ladder, range(limit + 1))
    return ("PASS" if rep.ok else "FAIL"), {
        "checked": [list(r) for r in rep.results],
        "exact": rep.ok,
    }


def _task_bispec_discover(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    if not cfg.is_canonical():
        return "REPORT", {
            "note": "discovery ships with the canonical eigenvalue ladder only"
        }
    _, ladder = reference_operator()
    n_fit = min(len(ctx.fold()) - 1, 12)
    res = discover_operator(ctx.fold(), ladder, 8, 6, n_fit)
    ref, _ = reference_operator()
    matches = res.operator == ref
    return ("PASS" if matches and res.hom_dim == 0 else "FAIL"), {
        "n_fit": n_fit,
        "hom_dim": res.hom_dim,
        "matches_reference": matches,
        "operator": operator_to_json(res.operator),
    }


def _task_min_order(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    n_fit = min(len(ctx.fold()) - 1, 10)
    max_order, deg = 8, 6
    step = cfg.N + 1
    rows = sum(step * (step * (n + deg + 1) - 1) for n in range(n_fit + 1))
    unknowns = (max_order + 1) * step * step * (deg + 1)
    if rows < unknowns:
        return "REPORT", {
            "note": "fitted window is underdetermined at this n_max; a "
            "minimal-order certificate needs more blocks",
            "rows": rows,
            "unknowns": unknowns,
        }
    res = min_order_check(ctx.fold(), max_order, deg, n_fit)
    payload = {
        "min_order": res.min_order,
        "n_fit": n_fit,
        "feasible": list(res.feasible),
        "section_dims": list(res.section_dims),
    }
    if cfg.is_canonical():
        payload["expected"] = 8
        return ("PASS" if res.min_order == 8 else "FAIL"), payload
    return "REPORT", payload


def _task_conjugation(ctx: _Context) -> tuple[str, dict]:
    cfg = ctx.cfg
    if not cfg.is_canonical():
        return "REPORT", {
            "note": "scalar ladder for conjugation is tabulated only for the "
            "canonical configuration"
        }
    seq = ctx.seq()
    n_fit = min(len(seq) - 1, 16)
    D = discover_scalar(seq, reference_scalar_ladder, 8, n_fit)
    grid = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3), Fraction(10)]
    n_limit = min(len(seq) // (cfg.N + 1) - 1, 6)
    worst = 0.0
    for y0 in grid:
        for n in range(n_limit + 1):
            r = conjugation_eval(D, cfg.N, seq, n, y0)
            worst = max(worst, r.max_deviation)
    ok = worst < cfg.float_tolerance
    return ("PASS" if ok else "FAIL"), {
        "scalar_order": D.order,
        "scalar_coeffs": [_poly_json(c) for c in D.coeffs],
        "grid": [rat_str(v) for v in grid],
        "n_through": n_limit,
        "worst_deviation_float": worst,
    }


_TASK_FNS = {
    "moments": _task_moments,
    "gram": _task_gram,
    "orthopoly": _task_orthopoly,
    "recurrence": _task_recurrence,
    "connection": _task_connection,
    "darboux": _task_darboux,
    "fold": _task_fold,
    "ttrr": _task_ttrr,
    "bispec-verify": _task_bispec_verify,
    "bispec-discover": _task_bispec_discover,
    "min-order": _task_min_order,
    "conjugation": _task_conjugation,
}


def run(cfg: RunConfig) -> dict:
    """Execute the resolved task list and assemble the report."""
    ctx = _Context(cfg)
    tasks = {}
    any_fail = False
    for name in cfg.resolved_tasks():
        t0 = time.monotonic()
        try:
            status, payload = _TASK_FNS[name](ctx)
        except OpfoldError as exc:
            status = "FAIL"
            payload = {"error": type(exc).__name__, "message": str(exc)}
        print(f"task {name}: {time.monotonic() - t0:.2f}s", file=sys.stderr)
        tasks[name] = {"status": status, **payload}
        any_fail = any_fail or status == "FAIL"
    report = {
        "config": cfg.echo(),
        "tasks": tasks,
        "overall": "FAIL" if any_fail else "PASS",
    }
    if "darboux" in tasks and cfg.is_canonical():
        report["notes"] = {
            "zeta-display": {
                "status": "REPORT",
                "detail": "the two tabulated zeta closed forms reproduce the "
                "extracted blocks with their even/odd labels interchanged; "
                "zeta_match uses the corrected pairing, "
                "zeta_printed_labels_match the printed one",
            },
            "darboux-product-display": {
                "status": "REPORT",
                "detail": "the tabulated product display matches "
                "zeta_{2n+1} zeta_{2n} under the corrected labels; per-n "
                "booleans are in the darboux task rows",
            },
        }
    return report


def _fmt_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def emit_tables(report: dict, out_dir: Path) -> list[Path]:
    """Write CSV side tables for whichever tasks ran."""
    written = []
    tasks = report.get("tasks", {})
    if "moments" in tasks and "values" in tasks["moments"]:
        p = out_dir / "moments.csv"
        lines = ["k,value"]
        lines += [f"{k},{v}" for k, v in enumerate(tasks["moments"]["values"])]
        p.write_text("\n".join(lines) + "\n")
        written.append(p)
    if "recurrence" in tasks and "rows" in tasks["recurrence"]:
        p = out_dir / "recurrence.csv"
        rows = tasks["recurrence"]["rows"]
        keys = sorted({k for r in rows for k in r})
        lines = [",".join(keys)]
        for r in rows:
            lines.append(",".join(str(r.get(k, "")) for k in keys))
        p.write_text("\n".join(lines) + "\n")
        written.append(p)
    if "darboux" in tasks and "zetas" in tasks["darboux"]:
        p = out_dir / "zeta.csv"
        lines = ["k,i,j,value"]
        zet = tasks["darboux"]["zetas"]
        for k in sorted(zet, key=int):
            mat = zet[k]
            for i, row in enumerate(mat):
                for j, v in enumerate(row):
                    lines.append(f"{k},{i},{j},{v}")
        p.write_text("\n".join(lines) + "\n")
        written.append(p)
    if "bispec-discover" in tasks and "operator" in tasks["bispec-discover"]:
        p = out_dir / "operator.csv"
        lines = ["k,i,j,t,value"]
        op = tasks["bispec-discover"]["operator"]
        for k, mat in enumerate(op["coeffs"]):
            for i, row in enumerate(mat):
                for j, entry in enumerate(row):
                    for t, v in enumerate(entry):
                        lines.append(f"{k},{i},{j},{t},{v}")
        p.write_text("\n".join(lines) + "\n")
        written.append(p)
    return written


_VERIFY_PAPER_CONFIG = {
    "measure": {"type": "laguerre", "alpha": 0},
    "c": "0",
    "N": 1,
    "M": [["0", "0"], ["0", "1"]],
    "n_max": 12,
    "tasks": ["all"],
    "float_tolerance": "1e-10",
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="opfold",
        description="Sobolev-type orthogonal polynomial factorization toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute tasks from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the config JSON")
    p_run.add_argument("--out", help="directory for the report and tables")
    p_run.add_argument("--format", choices=("json", "csv"), default="json")
    p_vp = sub.add_parser(
        "verify-paper", help="run the built-in full verification suite"
    )
    p_vp.add_argument("--out", help="directory for the report and tables")
    p_vp.add_argument("--format", choices=("json", "csv"), default="json")
    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            try:
                raw = json.loads(Path(args.config).read_text())
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
            cfg = RunConfig.from_dict(raw)
        else:
            cfg = RunConfig.from_dict(_VERIFY_PAPER_CONFIG)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    report = run(cfg)
    text = _fmt_json(report)
    out_dir = args.out or cfg.output
    if out_dir:
        out_path = Path(out_dir)
        out_path.mkdir(parents=True, exist_ok=True)
        (out_path / "report.json").write_text(text)
        if args.format == "csv":
            emit_tables(report, out_path)
        print(f"report written to {out_path / 'report.json'}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 1 if report["overall"] == "FAIL" else 0


if __name__ == "__main__":
    sys.exit(main())
