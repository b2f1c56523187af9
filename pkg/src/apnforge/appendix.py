"""Reproduction of the s = 1 elimination: r1, r2 = V0 (V0 + U0) g, and the
GF(8) plane section giving the degree-26 curve h2."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .field import FieldCtx
from .mpoly import GF2, GF8, MPoly, NotDivisible, det_numeric, resultant, sylvester_matrix

U0, U1, U2, V0, V1, V2 = range(6)
OMEGA = 0b010  # class of x in GF(8) = GF(2)[x]/(x^3 + x + 1)


def load_fixture(name: str, field: FieldCtx) -> MPoly:
    text = resources.files("apnforge.data").joinpath(f"{name}.txt").read_text()
    return MPoly.from_text(text, field)


def system_s1(field: FieldCtx = GF2) -> tuple[MPoly, MPoly, MPoly]:
    """f1, f2, f3 for s = 1, cleared of the (U_i + V_i) denominators."""
    u0, u1, u2, v0, v1, v2 = MPoly.gens(field)
    f1 = v0**2 * (u1**2 + u0) + u0**2 * (v1**2 + v0)
    f2 = v1**2 * (u2**2 + u1) + u1**2 * (v2**2 + v1)
    f3 = v2**2 * (u0**2 + u2) + u2**2 * (v0**2 + v2)
    return f1, f2, f3


def section_substitution() -> list:
    """U2 <- U0 + U1, V0 <- omega U0 + omega^2 U1 (other variables kept)."""
    u0, u1, _, _, _, _ = MPoly.gens(GF8)
    return [None, None, u0 + u1, u0.scale(OMEGA) + u1.scale(GF8.power(OMEGA, 2)), None, None]


def first_difference(got: MPoly, want: MPoly) -> str | None:
    diff = got + want
    if not diff:
        return None
    e, _ = diff.leading_term()
    return f"exponent {e}: got {got.terms.get(e, 0):x}, listed {want.terms.get(e, 0):x}"


def _normalise(p: MPoly, e: tuple[int, ...]) -> tuple[MPoly, int]:
    c = p.terms.get(e, 0)
    if not c:
        return p, 0
    return p.scale(p.field.inv(c)), c


def _scalar_multiple(p: MPoly, target: MPoly) -> int | None:
    """k with omega^k * p == target, if any."""
    for k in range(7):
        if p.scale(GF8.power(OMEGA, k)) == target:
            return k
    return None


def _numeric_resultant(p: MPoly, q: MPoly, var: int, point) -> int:
    pc = [c.evaluate(point) for c in p.coeffs_in(var)]
    qc = [c.evaluate(point) for c in q.coeffs_in(var)]
    return det_numeric(GF8, sylvester_matrix(pc, qc, 0))


def evaluation_check(r1_listed: MPoly, g_listed: MPoly, samples: int = 10_000, seed: int = 0) -> dict:
    """Check the listed r1 and V0 (V0+U0) g against numeric Sylvester
    determinants at random points of GF(8)^6."""
    f1, f2, f3 = (f.lift(GF8) for f in system_s1())
    r1 = r1_listed.lift(GF8)
    g = g_listed.lift(GF8)
    rng = np.random.default_rng(seed)
    bad_r1 = bad_r2 = 0
    for point in rng.integers(0, 8, size=(samples, 6)).tolist():
        if r1.evaluate(point) != _numeric_resultant(f1, f2, V1, point):
            bad_r1 += 1
        lhs = GF8.mul(GF8.mul(point[V0], point[V0] ^ point[U0]), g.evaluate(point))
        if lhs != _numeric_resultant(r1, f3, V2, point):
            bad_r2 += 1
    return {"samples": samples, "r1_mismatches": bad_r1, "r2_mismatches": bad_r2,
            "ok": bad_r1 == 0 and bad_r2 == 0}


def verify_appendix(samples: int = 10_000, seed: int = 0) -> dict:
    r1_listed = load_fixture("r1", GF2)
    g_listed = load_fixture("g", GF2)
    h1_listed = load_fixture("h1", GF8)
    h2_listed = load_fixture("h2", GF8)
    report: dict = {}

    f1, f2, f3 = system_s1()
    r1 = resultant(f1, f2, V1)
    report["r1"] = {"terms": len(r1), "total_degree": r1.total_degree(),
                    "mismatch": first_difference(r1, r1_listed)}

    r2 = resultant(r1, f3, V2)
    u0, _, _, v0, _, _ = MPoly.gens(GF2)
    step_c: dict = {"r2_terms": len(r2)}
    try:
        g = r2.trial_divide(v0).trial_divide(v0 + u0)
        step_c.update(g_terms=len(g), mismatch=first_difference(g, g_listed))
    except NotDivisible:
        g = None
        step_c.update(g_terms=None, mismatch="r2 is not divisible by V0 (V0 + U0)")
    report["r2"] = step_c

    subs = section_substitution()
    section: dict = {}
    if g is not None:
        G, lead = _normalise(g.lift(GF8).compose(subs), (26, 0, 0, 0, 0, 0))
        section.update(h2_degree=G.total_degree(), h2_terms=len(G),
                       h2_scale_hex=f"{lead:x}", mismatch=first_difference(G, h2_listed))
    # secondary equations of the section: V2^4 and V1^2 denominators/numerators
    R1 = r1.lift(GF8).compose(subs).coeffs_in(V2)
    section["h1_omega_power"] = _scalar_multiple(R1[0], h1_listed) if len(R1) == 5 else None
    section["h1_ok"] = len(R1) == 5 and R1[4] == load_u0u1_monomial(4, 4) and section["h1_omega_power"] == 6
    report["section"] = section

    report["evaluation"] = evaluation_check(r1_listed, g_listed, samples, seed)
    report["ok"] = (
        report["r1"]["mismatch"] is None
        and step_c["mismatch"] is None
        and section.get("mismatch", "missing") is None
        and section["h2_degree"] == 26
        and report["evaluation"]["ok"]
    )
    return report


def load_u0u1_monomial(a: int, b: int) -> MPoly:
    return MPoly(GF8, 6, {(a, b, 0, 0, 0, 0): 1})


def h2_curve() -> MPoly:
    """h2 as a bivariate polynomial in (U0, U1) over GF(8)."""
    return load_fixture("h2", GF8).project([U0, U1])
