"""Executable catalog of the bound and tightness statements.

Each case binds constructions or a seeded random ensemble to claims. A claim
records what was expected, what was computed and whether the relation held.
Reports serialize deterministically; timing is kept out of the JSON unless
asked for, so identical runs give identical bytes.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .constructions import (
    BlockSpec,
    corollary_5_2_family,
    lemma_5_3_family,
    lemma_5_4_family,
    make_b_d,
    make_block_matrix,
    make_lemma_5_3,
    make_lemma_5_4,
    merge,
)
from .dimensions import PsiFamily, dimension, psi_dimension, verify_witness
from .errors import BudgetExceeded, SpecError
from .matrix import (
    STAR,
    Domain,
    RationalMatrix,
    TriBoolMatrix,
    augment_zero_row,
    format_matrix,
    format_rational,
    transpose,
)
from .shattering import Kind, ShatterSpec

DEFAULT_SEED = 20240601
DEFAULT_SAMPLES = 200

EXACT = "exact-equality"
SUITE = "inequality-suite"
GROWTH = "growth-series"

PASS, FAIL, SKIPPED = "pass", "fail", "skipped (budget)"


def _spec(kind, gamma=None, dual=False):
    return ShatterSpec(Kind(kind), gamma, dual)


def _fmt(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


@dataclass
class Claim:
    name: str
    expected: object
    computed: object
    relation: str = "=="
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        e, c = self.expected, self.computed
        if self.relation == "==":
            return c == e
        if self.relation == "<=":
            return c <= e
        if self.relation == ">=":
            return c >= e
        if self.relation == "increasing":
            return all(a < b for a, b in zip(c, c[1:]))
        raise ValueError(self.relation)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "expected": _fmt(self.expected),
            "relation": self.relation,
            "computed": _fmt(self.computed),
            "pass": self.passed,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class TheoremCase:
    id: str
    mode: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    description: str = ""


@dataclass
class Report:
    case: str
    params: dict
    mode: str
    status: str = PASS
    claims: list[Claim] = field(default_factory=list)
    witnesses: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    seed: int | None = None
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "case": self.case,
            "params": {k: _fmt(v) if not isinstance(v, list) else [_fmt(x) for x in v]
                       for k, v in self.params.items()},
            "mode": self.mode,
            "status": self.status,
            "claims": [c.to_dict() for c in self.claims],
            "witnesses": self.witnesses,
            "notes": self.notes,
            "seed": self.seed,
        }
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


class _Ctx:
    """Per-case scratch: deadline, witness sink, collected claims."""

    def __init__(self, case: TheoremCase, deadline, witness_dir):
        self.case = case
        self.deadline = deadline
        self.witness_dir = Path(witness_dir) if witness_dir else None
        self.claims: list[Claim] = []
        self.witnesses: list[str] = []
        self.notes: list[str] = []

    def dim(self, A, kind, gamma=None, dual=False, witness_name=None):
        d, w = dimension(A, _spec(kind, gamma, dual), deadline=self.deadline)
        if w is not None:
            if not verify_witness(A, w):
                raise AssertionError(f"search produced an invalid witness for {witness_name}")
            if self.witness_dir is not None and witness_name:
                self.witness_dir.mkdir(parents=True, exist_ok=True)
                path = self.witness_dir / f"{self.case.id}--{witness_name}.json"
                path.write_text(w.to_json(), encoding="utf-8")
                self.witnesses.append(str(path))
        return d

    def claim(self, name, expected, computed, relation="==", matrix=None):
        c = Claim(name, expected, computed, relation)
        if not c.passed and matrix is not None:
            c.counterexample = {"matrix": format_matrix(matrix)}
        self.claims.append(c)
        return c


# -- random ensembles -------------------------------------------------------------


def random_integer_matrix(rng: random.Random, k: int, max_rows=8, max_cols=8, min_rows=1):
    n = rng.randint(min_rows, max_rows)
    m = rng.randint(1, max_cols)
    return RationalMatrix(
        [[rng.randint(0, k) for _ in range(m)] for _ in range(n)], domain=Domain.integer(k)
    )


def random_unit_matrix(rng: random.Random, grid=8, max_rows=8, max_cols=8):
    n = rng.randint(1, max_rows)
    m = rng.randint(1, max_cols)
    return RationalMatrix(
        [[Fraction(rng.randint(0, grid), grid) for _ in range(m)] for _ in range(n)],
        domain=Domain.unit(),
    )


def random_tribool_matrix(rng: random.Random, max_rows=8, max_cols=8):
    n = rng.randint(1, max_rows)
    m = rng.randint(1, max_cols)
    return TriBoolMatrix([[rng.choice((0, 1, STAR)) for _ in range(m)] for _ in range(n)])


def _suite(ctx: _Ctx, name: str, samples, check: Callable):
    """Run ``check`` on every sample; record violations and the sample size."""
    violations = 0
    first_bad = None
    count = 0
    for A in samples:
        count += 1
        detail = check(A)
        if detail is not None:
            violations += 1
            if first_bad is None:
                text = format_matrix(A) if isinstance(A, RationalMatrix) else repr(A.rows)
                first_bad = {"matrix": text, "values": detail}
    c = Claim(f"{name}: violations", 0, violations)
    c.counterexample = first_bad
    ctx.claims.append(c)
    # an empty ensemble must never count as a pass
    ctx.claims.append(Claim(f"{name}: sample size", 1, count, ">="))


def _ceil_inv(gamma: Fraction) -> int:
    return math.ceil(1 / gamma)


# -- case runners ----------------------------------------------------------------


def _run_pdim_ub(ctx):
    p = ctx.case.params
    rng = random.Random(ctx.case.seed)
    for k in p["k"]:
        samples = [random_integer_matrix(rng, k) for _ in range(p["samples"])]

        def check(A, k=k):
            pd, vd = ctx.dim(A, "P"), ctx.dim(A, "V")
            return None if pd <= k * vd else {"Pdim": pd, "Vdim": vd}

        _suite(ctx, f"Pdim <= {k}*Vdim over {{0..{k}}}", samples, check)


def _run_chain(ctx):
    p = ctx.case.params
    rng = random.Random(ctx.case.seed)
    samples = [random_unit_matrix(rng) for _ in range(p["samples"])]
    gammas = sorted(Fraction(g) for g in p["gamma"])

    def check(A):
        pd, vd = ctx.dim(A, "P"), ctx.dim(A, "V")
        pg = [ctx.dim(A, "P_gamma", g) for g in gammas]
        vg = [ctx.dim(A, "V_gamma", g) for g in gammas]
        ok = vd <= pd
        ok &= all(v <= q for v, q in zip(vg, pg))
        ok &= all(q <= pd for q in pg) and all(v <= vd for v in vg)
        # narrower width can only shatter more
        ok &= all(a >= b for a, b in zip(pg, pg[1:])) and all(a >= b for a, b in zip(vg, vg[1:]))
        return None if ok else {"Pdim": pd, "Vdim": vd, "P_gamma": pg, "V_gamma": vg}

    _suite(ctx, "Vdim <= Pdim, V_g <= P_g, P_g <= Pdim, V_g <= Vdim, monotone in width",
           samples, check)


def _run_block_family(ctx, sizes_list, with_zero_row=True):
    for sizes in sizes_list:
        A = make_block_matrix(BlockSpec(tuple(sizes)))
        tag = ",".join(map(str, sizes))
        ctx.claim(f"blocks({tag}) Vdim", max(sizes), ctx.dim(A, "V", witness_name=f"vdim-{tag}"))
        if with_zero_row:
            ctx.claim(f"blocks({tag}) Vdim(zero-row)", max(sizes),
                      ctx.dim(augment_zero_row(A), "V"))
        ctx.claim(f"blocks({tag}) Pdim", sum(sizes), ctx.dim(A, "P", witness_name=f"pdim-{tag}"))


def _run_pdim_lb(ctx):
    for d, k in ctx.case.params["dk"]:
        A = make_block_matrix(BlockSpec((d,) * k))
        ctx.claim(f"(d={d},k={k}) Vdim", d, ctx.dim(A, "V"))
        ctx.claim(f"(d={d},k={k}) Pdim", k * d, ctx.dim(A, "P"))


def _run_example_growth(ctx):
    pd_series = []
    for k in range(1, ctx.case.params["k_max"] + 1):
        A = make_block_matrix(BlockSpec((1,) * k))
        ctx.claim(f"k={k} Vdim", 1, ctx.dim(A, "V"))
        pd = ctx.dim(A, "P")
        ctx.claim(f"k={k} Pdim", k, pd)
        pd_series.append(pd)
    ctx.claim("Pdim series", "strictly increasing", pd_series, "increasing")


def _run_fat_ub(ctx):
    p = ctx.case.params
    rng = random.Random(ctx.case.seed)
    samples = [random_unit_matrix(rng) for _ in range(p["samples"])]
    for g in p["gamma"]:
        g = Fraction(g)
        r = _ceil_inv(g) - 1

        def check(A, g=g, r=r):
            pg, vh, pd = ctx.dim(A, "P_gamma", g), ctx.dim(A, "V_gamma", g / 2), ctx.dim(A, "P")
            if pg <= r * vh <= r * pd:
                return None
            return {"P_gamma": pg, "V_gamma/2": vh, "Pdim": pd}

        _suite(ctx, f"P_gamma <= {r}*V_gamma/2 <= {r}*Pdim at gamma={g}", samples, check)


def _run_assouad(ctx):
    rng = random.Random(ctx.case.seed)
    samples = []
    for _ in range(ctx.case.params["samples"]):
        A = random_integer_matrix(rng, 1)
        samples.append(A)

    def check(A):
        vc, vcd = ctx.dim(A, "VC"), ctx.dim(A, "VC", dual=True)
        return None if vcd <= 2 ** (vc + 1) - 1 else {"VC": vc, "VC*": vcd}

    _suite(ctx, "VC* <= 2^(VC+1)-1", samples, check)


def _run_assouad_uniform(ctx):
    p = ctx.case.params
    rng = random.Random(ctx.case.seed)
    samples = [random_unit_matrix(rng) for _ in range(p["samples"])]

    def check_v(A):
        v, vd = ctx.dim(A, "V"), ctx.dim(A, "V", dual=True)
        return None if vd <= 2 ** (v + 1) - 1 else {"Vdim": v, "Vdim*": vd}

    _suite(ctx, "Vdim* <= 2^(Vdim+1)-1", samples, check_v)
    for g in p["gamma"]:
        g = Fraction(g)

        def check_g(A, g=g):
            v, vd = ctx.dim(A, "V_gamma", g), ctx.dim(A, "V_gamma", g, dual=True)
            return None if vd <= 2 ** (v + 1) - 1 else {"V_gamma": v, "V_gamma*": vd}

        _suite(ctx, f"V_gamma* <= 2^(V_gamma+1)-1 at gamma={g}", samples, check_g)


def _run_dual_pdim_folklore(ctx):
    p = ctx.case.params
    rng = random.Random(ctx.case.seed)
    for k in p["k"]:
        samples = [random_integer_matrix(rng, k) for _ in range(p["samples"])]

        def check(A, k=k):
            pds, vd, pd = ctx.dim(A, "P", dual=True), ctx.dim(A, "V"), ctx.dim(A, "P")
            if pds <= k * (2 ** (vd + 1) - 1) <= k * (2 ** (pd + 1) - 1):
                return None
            return {"Pdim*": pds, "Vdim": vd, "Pdim": pd}

        _suite(ctx, f"Pdim* <= {k}*(2^(Vdim+1)-1) over {{0..{k}}}", samples, check)


def _run_dual_fat_folklore(ctx):
    p = ctx.case.params
    rng = random.Random(ctx.case.seed)
    samples = [random_unit_matrix(rng) for _ in range(p["samples"])]
    for g in p["gamma"]:
        g = Fraction(g)
        r = _ceil_inv(g) - 1

        def check(A, g=g, r=r):
            pgs = ctx.dim(A, "P_gamma", g, dual=True)
            vh, pd = ctx.dim(A, "V_gamma", g / 2), ctx.dim(A, "P")
            if pgs <= r * (2 ** (vh + 1) - 1) <= r * (2 ** (pd + 1) - 1):
                return None
            return {"P_gamma*": pgs, "V_gamma/2": vh, "Pdim": pd}

        _suite(ctx, f"P_gamma* <= {r}*(2^(V_gamma/2+1)-1) at gamma={g}", samples, check)


def _vdim_one_ensemble(rng, k, want, max_rows, max_cols, cap, dim):
    out, tries = [], 0
    while len(out) < want and tries < cap:
        tries += 1
        A = random_integer_matrix(rng, k, max_rows, max_cols, min_rows=2)
        if dim(A, "V") == 1:
            out.append(A)
    return out, tries


def _run_thm_4_1(ctx):
    p = ctx.case.params
    rng = random.Random(ctx.case.seed)
    for k in p["k"]:
        samples, tries = _vdim_one_ensemble(
            rng, k, p["samples"], p["max_rows"], p["max_cols"], p["cap"], ctx.dim
        )
        if len(samples) < p["samples"]:
            ctx.notes.append(f"k={k}: ensemble under-filled, {len(samples)} of {p['samples']}"
                             f" after {tries} draws")

        def check(A, k=k):
            pds = ctx.dim(A, "P", dual=True)
            return None if pds <= k + 2 else {"Pdim*": pds}

        _suite(ctx, f"Vdim=1 => Pdim* <= {k + 2} over {{0..{k}}}", samples, check)
        ctx.claim(f"k={k} ensemble size", p["samples"], len(samples))
    for k in p["tight_k"]:
        A = make_lemma_5_4(k)
        ctx.claim(f"lemma54(k={k}) Vdim", 1, ctx.dim(A, "V"))
        ctx.claim(f"lemma54(k={k}) Pdim*", k + 2, ctx.dim(A, "P", dual=True))


def _lemma_5_3_claims(ctx, d, k, prefix=""):
    A = make_lemma_5_3(d, k)
    tag = f"{prefix}(d={d},k={k})"
    ctx.claim(f"{tag} Pdim", d, ctx.dim(A, "P", witness_name=f"pdim-d{d}-k{k}"))
    ctx.claim(f"{tag} Pdim(zero-row)", d, ctx.dim(augment_zero_row(A), "P"))
    ctx.claim(f"{tag} Vdim*", 2 ** d, ctx.dim(A, "V", dual=True))
    ctx.claim(f"{tag} Pdim*", k * 2 ** d,
              ctx.dim(A, "P", dual=True, witness_name=f"pdim-dual-d{d}-k{k}"))


def _lemma_5_4_claims(ctx, k, zero_row=True):
    A = make_lemma_5_4(k)
    ctx.claim(f"lemma54(k={k}) Pdim", 1, ctx.dim(A, "P"))
    if zero_row:
        Ad = augment_zero_row(A)
        ctx.claim(f"lemma54(k={k}) Pdim(zero-row)", 1,
                  ctx.dim(Ad, "P", witness_name=f"pdim-zero-row-k{k}"), matrix=Ad)
    ctx.claim(f"lemma54(k={k}) Pdim*", k + 2,
              ctx.dim(A, "P", dual=True, witness_name=f"pdim-dual-k{k}"))


def _run_thm_4_2(ctx):
    p = ctx.case.params
    for d, k in p["part1"]:
        A = make_lemma_5_3(d, k)
        tag = f"part1(d={d},k={k})"
        ctx.claim(f"{tag} Pdim", d, ctx.dim(A, "P"))
        ctx.claim(f"{tag} Vdim*", 2 ** d, ctx.dim(A, "V", dual=True))
        ctx.claim(f"{tag} Pdim*", k * 2 ** d, ctx.dim(A, "P", dual=True))
    for k in p["part2"]:
        A = make_lemma_5_4(k)
        ctx.claim(f"part2(k={k}) Vdim", 1, ctx.dim(A, "V"))
        ctx.claim(f"part2(k={k}) Pdim", 1, ctx.dim(A, "P"))
        ctx.claim(f"part2(k={k}) Pdim*", k + 2, ctx.dim(A, "P", dual=True))
    A = make_lemma_5_3(1, 1)
    ctx.notes.append(
        f"d=1 instance recorded, not asserted: Pdim={ctx.dim(A, 'P')}, "
        f"Vdim*={ctx.dim(A, 'V', dual=True)}, Pdim*={ctx.dim(A, 'P', dual=True)}"
    )


def _run_cor_4_3(ctx):
    K = ctx.case.params["K"]
    M = merge(lemma_5_4_family(K))
    ctx.claim(f"merge(K={K}) Pdim", 1, ctx.dim(M, "P", witness_name="pdim"), matrix=M)
    series = []
    for k in range(2, K + 1):
        g = Fraction(1, 2 * k)
        v = ctx.dim(M, "P_gamma", g, dual=True)
        ctx.claim(f"P*_(1/{2 * k})", k + 2, v)
        series.append(v)
    ctx.claim("P*_(1/2k) series over k", "strictly increasing", series, "increasing")
    _below_boundary(ctx, M, range(2, K + 1), lambda k: k + 2, dual=True)


def _below_boundary(ctx, M, ks, expected, dual, relation="=="):
    """Same statements at width 1/(2k+1), just inside the strict margin."""
    for k in ks:
        g = Fraction(1, 2 * k + 1)
        ctx.claim(f"[width 1/{2 * k + 1}] P{'*' if dual else ''}_(1/{2 * k + 1})",
                  expected(k), ctx.dim(M, "P_gamma", g, dual=dual), relation)


def _run_thm_4_4(ctx):
    d, K = ctx.case.params["d"], ctx.case.params["K"]
    M = merge(corollary_5_2_family(d, K))
    ctx.claim(f"merge(d={d},K={K}) Pdim", d, ctx.dim(M, "P", witness_name="pdim"), matrix=M)
    ctx.claim(f"merge(d={d},K={K}) Vdim", d, ctx.dim(M, "V"))
    for k in range(1, K + 1):
        g = Fraction(1, 2 * k)
        ctx.claim(f"P_(1/{2 * k})", k * d, ctx.dim(M, "P_gamma", g), ">=")
    _below_boundary(ctx, M, range(1, K + 1), lambda k: k * d, dual=False, relation=">=")


def _run_thm_4_5(ctx):
    p = ctx.case.params
    d, K1 = p["d"], p["K1"]
    M1 = merge(lemma_5_3_family(d, K1))
    ctx.claim(f"part1 merge(d={d},K={K1}) Pdim", d, ctx.dim(M1, "P"))
    for k in range(1, K1 + 1):
        ctx.claim(f"part1 P*_(1/{2 * k})", k * 2 ** d,
                  ctx.dim(M1, "P_gamma", Fraction(1, 2 * k), dual=True))
    _below_boundary(ctx, M1, range(1, K1 + 1), lambda k: k * 2 ** d, dual=True)
    K2 = p["K2"]
    M2 = merge(lemma_5_4_family(K2))
    ctx.claim(f"part2 merge(K={K2}) Pdim", 1, ctx.dim(M2, "P"), matrix=M2)
    for k in range(2, K2 + 1):
        ctx.claim(f"part2 P*_(1/{2 * k})", k + 2,
                  ctx.dim(M2, "P_gamma", Fraction(1, 2 * k), dual=True))
    _below_boundary(ctx, M2, range(2, K2 + 1), lambda k: k + 2, dual=True)


def _run_lem_5_2(ctx):
    _run_block_family(ctx, ctx.case.params["sizes"])


def _run_cor_5_2(ctx):
    for d, k in ctx.case.params["dk"]:
        A = make_block_matrix(BlockSpec((d,) * k))
        ctx.claim(f"(d={d},k={k}) Vdim", d, ctx.dim(A, "V"))
        ctx.claim(f"(d={d},k={k}) Vdim(zero-row)", d, ctx.dim(augment_zero_row(A), "V"))
        ctx.claim(f"(d={d},k={k}) Pdim", k * d, ctx.dim(A, "P"))


def _run_lem_5_3(ctx):
    for d, k in ctx.case.params["dk"]:
        _lemma_5_3_claims(ctx, d, k)


def _run_lem_5_4(ctx):
    for k in ctx.case.params["k"]:
        _lemma_5_4_claims(ctx, k)
    if 1 in ctx.case.params.get("k1_remark", []):
        A = transpose(make_b_d(3))
        ctx.claim("B_3^T VC*", 3, ctx.dim(A, "VC", dual=True))
        ctx.claim("B_3^T VC", 1, ctx.dim(A, "VC"))


def _run_lem_merge(ctx):
    p = ctx.case.params
    families = {
        "blocks": lambda K: corollary_5_2_family(p["d"], K),
        "lemma53": lambda K: lemma_5_3_family(p["d"], K),
        "lemma54": lambda K: lemma_5_4_family(K),
    }
    for name in p["families"]:
        fam = families[name](p["K"])
        M = merge(fam)
        pd_dot = max(ctx.dim(augment_zero_row(A), "P") for _, A in fam.members)
        vd_dot = max(ctx.dim(augment_zero_row(A), "V") for _, A in fam.members)
        ctx.claim(f"{name}: Pdim(merge) <= max Pdim(zero-row A_k)", pd_dot, ctx.dim(M, "P"), "<=")
        ctx.claim(f"{name}: Vdim(merge) <= max Vdim(zero-row A_k)", vd_dot, ctx.dim(M, "V"), "<=")
        for k, A in fam.members:
            g = Fraction(1, 2 * k)
            ctx.claim(f"{name}: P_(1/{2 * k})(merge) >= Pdim(A_{k})",
                      ctx.dim(A, "P"), ctx.dim(M, "P_gamma", g), ">=")
            ctx.claim(f"{name}: V_(1/{2 * k})(merge) >= Vdim(A_{k})",
                      ctx.dim(A, "V"), ctx.dim(M, "V_gamma", g), ">=")
            g2 = Fraction(1, 2 * k + 1)
            ctx.claim(f"{name}: [width 1/{2 * k + 1}] P(merge) >= Pdim(A_{k})",
                      ctx.dim(A, "P"), ctx.dim(M, "P_gamma", g2), ">=")


def _run_tribool_assouad(ctx):
    rng = random.Random(ctx.case.seed)
    samples = [random_tribool_matrix(rng) for _ in range(ctx.case.params["samples"])]

    def check(B):
        vc, vcd = ctx.dim(B, "VC"), ctx.dim(B, "VC", dual=True)
        floor_log = vcd.bit_length() - 1 if vcd else 0
        return None if vc >= floor_log else {"VC": vc, "VC*": vcd}

    _suite(ctx, "{0,1,*}: VC >= floor(log2 VC*)", samples, check)


def _psi_samples(ctx):
    rng = random.Random(ctx.case.seed)
    return [random_unit_matrix(rng, grid=4, max_rows=6, max_cols=6)
            for _ in range(ctx.case.params["samples"])]


def _run_psi(ctx):
    samples = _psi_samples(ctx)
    sharp = PsiFamily("sharp")

    def check_sharp(A):
        phi, phi_u = psi_dimension(A, sharp, False), psi_dimension(A, sharp, True)
        pd, vd = ctx.dim(A, "P"), ctx.dim(A, "V")
        return None if (phi, phi_u) == (pd, vd) else {"Phi": phi, "Phi_U": phi_u, "P": pd, "V": vd}

    _suite(ctx, "sharp family: Phi = Pdim and Phi_U = Vdim", samples, check_sharp)
    for g in ctx.case.params["gamma"]:
        g = Fraction(g)
        fam = PsiFamily("width", g)

        def check_width(A, g=g, fam=fam):
            phi, phi_u = psi_dimension(A, fam, False), psi_dimension(A, fam, True)
            pg, vg = ctx.dim(A, "P_gamma", g), ctx.dim(A, "V_gamma", g)
            if (phi, phi_u) == (pg, vg):
                return None
            return {"Phi": phi, "Phi_U": phi_u, "P_gamma": pg, "V_gamma": vg}

        _suite(ctx, f"width family gamma={g}: Phi = P_gamma and Phi_U = V_gamma",
               samples, check_width)


def _run_psi_assouad(ctx):
    samples = _psi_samples(ctx)
    fams = [PsiFamily("sharp")] + [PsiFamily("width", Fraction(g)) for g in ctx.case.params["gamma"]]
    for fam in fams:
        def check(A, fam=fam):
            u, ud = psi_dimension(A, fam, True), psi_dimension(transpose(A), fam, True)
            return None if ud <= 2 ** (u + 1) - 1 else {"Phi_U": u, "Phi_U*": ud}

        label = "sharp" if fam.kind == "sharp" else f"width {format_rational(fam.gamma)}"
        _suite(ctx, f"{label}: Phi_U* <= 2^(Phi_U+1)-1", samples, check)


_RUNNERS: dict[str, Callable] = {}


def _catalog_entries():
    s = DEFAULT_SEED
    n = DEFAULT_SAMPLES
    return [
        (TheoremCase("ineq-3.1-chain", SUITE, {"gamma": ["1/8", "1/4", "1/2"], "samples": n},
                     s + 9, "Vdim <= Pdim and V_gamma <= P_gamma"), _run_chain),
        (TheoremCase("thm-3.1-pdim-ub", SUITE, {"k": [2, 3], "samples": n}, s,
                     "Pdim <= k * Vdim over {0..k}"), _run_pdim_ub),
        (TheoremCase("thm-3.1-pdim-lb", EXACT, {"dk": [[1, 2], [2, 2], [1, 3], [2, 3]]}, None,
                     "Vdim = d and Pdim = k*d are attained"), _run_pdim_lb),
        (TheoremCase("ex-3.1-truncated", GROWTH, {"k_max": 6}, None,
                     "Vdim = 1 while Pdim grows without bound"), _run_example_growth),
        (TheoremCase("thm-3.1-fat-ub", SUITE, {"gamma": ["1/2", "1/4"], "samples": n}, s + 1,
                     "P_gamma <= (ceil(1/gamma)-1) * V_gamma/2"), _run_fat_ub),
        (TheoremCase("thm-3.2-assouad", SUITE, {"samples": n}, s + 2,
                     "VC* <= 2^(VC+1) - 1"), _run_assouad),
        (TheoremCase("cor-3.2-assouad-uniform", SUITE, {"gamma": ["1/4", "1/8"], "samples": n},
                     s + 3, "Vdim* and V_gamma* obey the Assouad form"), _run_assouad_uniform),
        (TheoremCase("thm-3.2-dual-pdim", SUITE, {"k": [2, 3], "samples": n}, s + 4,
                     "Pdim* <= k*(2^(Vdim+1)-1)"), _run_dual_pdim_folklore),
        (TheoremCase("cor-3.2-dual-fat", SUITE, {"gamma": ["1/2", "1/4"], "samples": n}, s + 5,
                     "P_gamma* <= (ceil(1/gamma)-1)*(2^(V_gamma/2+1)-1)"), _run_dual_fat_folklore),
        (TheoremCase("thm-4.1", SUITE, {"k": [2, 3], "samples": n, "max_rows": 6, "max_cols": 8,
                                        "cap": 40 * n, "tight_k": [2, 3, 4]}, s + 6,
                     "Vdim = 1 implies Pdim* <= k+2"), _run_thm_4_1),
        (TheoremCase("thm-4.2", EXACT, {"part1": [[2, 1], [2, 2], [3, 1], [3, 2]],
                                        "part2": [1, 2, 3, 4]}, None,
                     "Pdim* = k*2^d with Pdim = d; Pdim* = k+2 with Pdim = 1"), _run_thm_4_2),
        (TheoremCase("cor-4.3-truncated", GROWTH, {"K": 3}, None,
                     "Pdim = 1 while dual fat dimension grows with K"), _run_cor_4_3),
        (TheoremCase("thm-4.4", EXACT, {"d": 2, "K": 3}, None,
                     "merge with Pdim = d and P_1/(2k) >= k*d"), _run_thm_4_4),
        (TheoremCase("thm-4.5", EXACT, {"d": 2, "K1": 2, "K2": 3}, None,
                     "dual fat dimension k*2^d and k+2 on merges"), _run_thm_4_5),
        (TheoremCase("lem-5.2", EXACT, {"sizes": [[2, 1], [1, 1, 1], [2, 2], [3, 1]]}, None,
                     "Vdim = max d_j (also with zero row) and Pdim = sum d_j"), _run_lem_5_2),
        (TheoremCase("cor-5.2", EXACT, {"dk": [[1, 2], [2, 2], [3, 1], [1, 4]]}, None,
                     "equal blocks: Vdim = d and Pdim = k*d"), _run_cor_5_2),
        (TheoremCase("lem-5.3", EXACT, {"dk": [[2, 1], [2, 2], [3, 1]]}, None,
                     "row blocks of size 2^d"), _run_lem_5_3),
        (TheoremCase("lem-5.4", EXACT, {"k": [2, 3, 4], "k1_remark": [1]}, None,
                     "row blocks (2,1,...,1,2)"), _run_lem_5_4),
        (TheoremCase("lem-merge", EXACT, {"d": 2, "K": 3,
                                          "families": ["blocks", "lemma54"]}, None,
                     "merge properties"), _run_lem_merge),
        (TheoremCase("app-a-tribool-assouad", SUITE, {"samples": n}, s + 7,
                     "VC >= floor(log2 VC*) over {0,1,*}"), _run_tribool_assouad),
        (TheoremCase("app-a-psi", SUITE, {"gamma": ["1/8", "1/4"], "samples": 100}, s + 8,
                     "threshold families give Pdim, Vdim, P_gamma, V_gamma"), _run_psi),
        (TheoremCase("app-a-psi-assouad", SUITE, {"gamma": ["1/8", "1/4"], "samples": 100}, s + 8,
                     "Phi_U* <= 2^(Phi_U+1) - 1"), _run_psi_assouad),
    ]


for _case, _fn in _catalog_entries():
    _RUNNERS[_case.id] = _fn

# Coverage map: every bound, tightness statement and appendix claim appears once.
COVERAGE = {
    "Vdim <= Pdim and V_gamma <= P_gamma": "ineq-3.1-chain",
    "Pdim <= k Vdim": "thm-3.1-pdim-ub",
    "Vdim = d, Pdim = kd attained": "thm-3.1-pdim-lb",
    "monotone functions: Vdim 1, Pdim infinite": "ex-3.1-truncated",
    "fat upper bound": "thm-3.1-fat-ub",
    "Assouad": "thm-3.2-assouad",
    "Assouad for Vdim and V_gamma": "cor-3.2-assouad-uniform",
    "dual Pdim folklore": "thm-3.2-dual-pdim",
    "dual fat folklore": "cor-3.2-dual-fat",
    "Vdim 1 implies Pdim* <= k+2": "thm-4.1",
    "dual Pdim lower bounds": "thm-4.2",
    "Pdim 1 with infinite dual": "cor-4.3-truncated",
    "fat lower bound": "thm-4.4",
    "dual fat lower bounds": "thm-4.5",
    "block matrix dimensions": "lem-5.2",
    "equal blocks": "cor-5.2",
    "row blocks of size 2^d": "lem-5.3",
    "row blocks (2,1,..,1,2)": "lem-5.4",
    "merge lemma": "lem-merge",
    "Assouad over {0,1,*}": "app-a-tribool-assouad",
    "Psi-dimension identities": "app-a-psi",
    "Assouad for uniform Psi-dimension": "app-a-psi-assouad",
}


def catalog() -> list[TheoremCase]:
    return [case for case, _ in _catalog_entries()]


def get_case(case_id: str, **overrides) -> TheoremCase:
    for case in catalog():
        if case.id == case_id:
            unknown = set(overrides) - set(case.params) - {"seed"}
            if unknown:
                raise SpecError(f"case {case_id} has no parameters {sorted(unknown)}")
            if "seed" in overrides:
                case.seed = overrides.pop("seed")
            case.params.update(overrides)
            return case
    raise SpecError(f"unknown case id {case_id!r}")


def run_case(case: TheoremCase, deadline: float | None = None, witness_dir=None) -> Report:
    start = time.monotonic()
    report = Report(case.id, dict(case.params), case.mode, seed=case.seed)
    if deadline is not None and start >= deadline:
        report.status = SKIPPED
        return report
    ctx = _Ctx(case, deadline, witness_dir)
    try:
        _RUNNERS[case.id](ctx)
    except BudgetExceeded:
        report.status = SKIPPED
        report.notes = ctx.notes + ["budget exhausted; no claim evaluated"]
        report.elapsed_ms = int((time.monotonic() - start) * 1000)
        return report
    report.claims = ctx.claims
    report.witnesses = ctx.witnesses
    report.notes = ctx.notes
    report.status = PASS if all(c.passed for c in ctx.claims) else FAIL
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    return report


def run_all(budget: float | None = None, case_ids=None, seed: int | None = None,
            witness_dir=None) -> list[Report]:
    """Run the catalog (or a subset) within ``budget`` seconds; None means no limit."""
    deadline = None if budget is None else time.monotonic() + budget
    reports = []
    for case in catalog():
        if case_ids is not None and case.id not in case_ids:
            continue
        if seed is not None and case.seed is not None:
            case.seed = seed + (case.seed - DEFAULT_SEED)
        reports.append(run_case(case, deadline, witness_dir))
    return sorted(reports, key=lambda r: r.case)


def reports_json(reports: list[Report], timing: bool = False) -> str:
    return json.dumps([r.to_dict(timing) for r in reports], indent=2, sort_keys=True) + "\n"


def format_table(reports: list[Report]) -> str:
    lines = [f"{'case':<26} {'status':<17} {'claims':>7} {'ms':>8}"]
    for r in reports:
        ok = sum(c.passed for c in r.claims)
        lines.append(f"{r.case:<26} {r.status:<17} {ok:>3}/{len(r.claims):<3} {r.elapsed_ms:>8}")
        for c in r.claims:
            if not c.passed:
                lines.append(f"    FAIL {c.name}: expected {c.relation} {_fmt(c.expected)},"
                             f" computed {_fmt(c.computed)}")
    return "\n".join(lines)
