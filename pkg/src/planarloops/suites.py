"""Named verification suites: exact checks with provenance tags.

A check pairs an expected value with a computation; it passes on exact
equality.  The provenance tag says where the expected value comes from:
``PUBLISHED`` for a published statement, ``DERIVED`` for an independent
computation (brute force or a closed form), ``TRIVIAL`` for identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import time
from typing import Callable

from . import cupcx, series
from .chaincore import check_d_squared, homology_table
from .diagrams import catalan, compose, empty, enumerate_diagrams, parse_diagram, phi_left, phi_right_prime, right_cup
from .exactlin import QQ, ZZ, DifferentialError, prime_field
from .loops import loops_d, loops_homology, phi
from .model import (
    beta_squared_vanishes,
    bockstein_homology_2n4,
    build_model_complex,
    cobar_of_Cn,
    dims_by_degree,
    doubled_middle_system,
    massey_formula,
    massey_general,
    massey_power,
    model_d,
    model_homology,
)
from .torext import ext_table_truncated_poly, tor_table


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    compute: Callable[[], object]
    provenance: str
    source: str


@dataclass
class CheckResult:
    check: Check
    computed: object
    passed: bool
    seconds: float
    error: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        got = self.error or repr(self.computed)
        return (f"{status}  {self.check.name}  [{self.check.provenance}: {self.check.source}]  "
                f"expected={self.check.expected!r} computed={got}  ({self.seconds:.2f}s)")


def _shape(table, q_max):
    """(free rank, torsion factors) per degree."""
    return [(table.degree(q).free_rank, table.degree(q).torsion) for q in range(q_max + 1)]


def _ranks_at(n, ring, d_max):
    table = model_homology(n, ring, d_max)
    return [q for q in range(d_max + 1) if not table.degree(q).is_zero]


def _one_loop_product():
    d = parse_diagram(4, 4, "L3L4, R2R3, L1-R1, L2-R4")
    e = parse_diagram(4, 4, "L2L3, L1L4, R1R2, R3R4")
    res = compose(d, e)
    return res.loops, res.diagram == parse_diagram(4, 4, "L1L2, L3L4, R1R2, R3R4")


def _two_by_six_composite():
    d = parse_diagram(2, 6, "R4R5, R2R3, L1-R1, L2-R6")
    e = parse_diagram(6, 4, "L2L3, L1L4, L5-R1, L6-R4, R2R3")
    res = compose(d, e)
    return res.loops, res.diagram == parse_diagram(2, 4, "L1-R1, L2-R4, R2R3")


def _d_squared_model():
    for n in range(1, 6):
        for a in range(4):
            cx = build_model_complex(n, ZZ.with_parameter(a), 11, weights=False)
            if not check_d_squared(cx):
                return False
    return True


def _phi_boundaries():
    for n in range(1, 4):
        for a in range(4):
            expected = {(empty(),): a} if a else {}
            if loops_d(phi(n), ZZ.with_parameter(a)) != expected:
                return False
    return True


def _inn_all():
    return all(
        all(s.is_zero for s in homology_table(cupcx.build_inn_complex(n, i)).entries.values())
        for n in range(5) for i in range(n + 1)
    )


def _out_all():
    return all(
        all(s.is_zero for s in homology_table(cupcx.build_out_complex(n)).entries.values())
        for n in range(1, 5)
    )


def _dout(n):
    table = homology_table(cupcx.dout_total(n, ZZ, 3), q_max=3).collapsed()
    return [str(table.degree(t)) for t in range(4)]


def _cobar_matches():
    for n in range(1, 5):
        cobar = cobar_of_Cn(n, ZZ, 8)
        model = build_model_complex(n, ZZ, 8)
        if set(cobar.differentials) != set(model.differentials):
            return False
        if any(cobar.differentials[key] != model.differentials[key] for key in model.differentials):
            return False
    return True


def _ext_matches_model(n):
    table = model_homology(n, QQ, 9)
    computed = sorted((q, w) for (q, w), s in table.entries.items() if s.free_rank and q <= 9)
    return computed == ext_table_truncated_poly(n, QQ, 9)


SUITES: dict[str, list[Check]] = {
    "diagrams": [
        Check("catalan counts |TL_2n|, 2n<=8", [catalan(2 * k) for k in (1, 2, 3, 4)],
              lambda: [len(enumerate_diagrams(2 * k, 2 * k)) for k in (1, 2, 3, 4)], "DERIVED", "brute force"),
        Check("TL_4 product with one loop", (1, True), _one_loop_product, "PUBLISHED",
              "multiplication example in TL_4"),
        Check("TL(2,6) x TL(6,4) composite", (1, True), _two_by_six_composite, "PUBLISHED",
              "composition example"),
        Check("Phi_l . Phi_r' = R_1 for 2n<=8", True,
              lambda: all(compose(phi_left(2 * n), phi_right_prime(2 * n)) == (right_cup(1, 2), 0)
                          for n in range(1, 5)), "PUBLISHED", "closing the loop halves"),
    ],
    "model": [
        Check("d o d = 0 on M(2n;Z,a), n<=5, a<=3, d<=11", True, _d_squared_model, "TRIVIAL", "dga axiom"),
        Check("d(Phi) = a in L(2n;Z,a), n<=3", True, _phi_boundaries, "PUBLISHED", "boundary of the single loop"),
        Check("<Phi,Phi,Phi> in M(4;Q,0)", {(1, 3): Fraction(1, 2), (3, 1): Fraction(1, 2)},
              lambda: massey_power(2, QQ, 3).product, "PUBLISHED", "triple Massey power"),
        Check("<Phi,Phi,Phi,Phi> in M(6;Q,0)", massey_formula(3, 4),
              lambda: massey_power(3, QQ, 4).product, "PUBLISHED", "Massey power formula"),
    ],
    "m4-integral": [
        Check("free ranks of H(M(4;Z,0)), d<=10", series.series("free-2n4", 10),
              lambda: [s for s, _ in _shape(model_homology(2, ZZ, 10), 10)], "PUBLISHED", "(1+t)/(1-t^4)"),
        Check("Z/2 summands of H(M(4;Z,0)), d<=10", series.series("torsion-2n4", 10),
              lambda: [len(t) for _, t in _shape(model_homology(2, ZZ, 10), 10)], "PUBLISHED",
              "t^2/((1-t-t^3)(1-t^4))"),
        Check("all torsion of H(M(4;Z,0)) is Z/2, d<=10", True,
              lambda: all(set(t) <= {2} for _, t in _shape(model_homology(2, ZZ, 10), 10)), "PUBLISHED",
              "2-torsion is simple"),
        Check("<Phi,2Phi,Phi> is the nonzero cycle x1x3+x3x1", ({(1, 3): 1, (3, 1): 1}, {}),
              lambda: (lambda p: (p, model_d(p)))(massey_general(doubled_middle_system(), 3, 0, ZZ).product),
              "PUBLISHED", "the class gamma"),
    ],
    "rational": [
        Check("H(M(4;Q,0)) nonzero degrees, d<=9", [0, 1, 4, 5, 8, 9], lambda: _ranks_at(2, QQ, 9), "PUBLISHED",
              "rational homology of L(4)"),
        Check("H(M(6;Q,0)) nonzero degrees, d<=9", [0, 1, 6, 7], lambda: _ranks_at(3, QQ, 9), "PUBLISHED",
              "rational homology of L(6)"),
    ],
    "prime-parameter": [
        Check("H(M(4;Z,3)), d<=9", [(0, (3,)) if q in (0, 4, 8) else (0, ()) for q in range(10)],
              lambda: _shape(model_homology(2, ZZ.with_parameter(3), 9), 9), "PUBLISHED", "parameter a = p prime"),
        Check("H(M(6;Z,5)), d<=7", [(0, (5,)) if q in (0, 6) else (0, ()) for q in range(8)],
              lambda: _shape(model_homology(3, ZZ.with_parameter(5), 7), 7), "PUBLISHED", "parameter a = p prime"),
    ],
    "loops": [
        Check("H(L(2;Z,0)), q<=6", [(1, ())] * 7, lambda: _shape(loops_homology(1, ZZ, 6), 6), "PUBLISHED",
              "homology of L(2)"),
        Check("H(L(4;Z,0)), q<=4 by degree", [(1, ()), (1, ()), (0, (2,)), (0, (2,)), (1, (2,))],
              lambda: _shape(loops_homology(2, ZZ, 4), 4), "PUBLISHED", "agreement with the small model"),
    ],
    "tor": [
        Check("Tor^{TL_4(Z,0)}(Z,Z), q<=4", [(1, ()), (0, ()), (0, ()), (1, ()), (1, ())],
              lambda: _shape(tor_table(2, ZZ, 4), 4), "PUBLISHED", "shift to loops homology"),
        Check("Tor^{TL_4(Z,1)} vanishes in degrees 1..3", True,
              lambda: all(tor_table(2, ZZ.with_parameter(1), 3).degree(q).is_zero for q in (1, 2, 3)),
              "PUBLISHED", "invertible parameter"),
        Check("dim H(M(4;F2,0)), d<=8", series.series("model-dims-2n4", 8),
              lambda: dims_by_degree(model_homology(2, prime_field(2), 8)), "PUBLISHED", "1/(1-t-t^3)"),
    ],
    "cups": [
        Check("Inn^aug(2n,2i) acyclic, 2n<=8", True, _inn_all, "PUBLISHED", "innermost cups"),
        Check("Out(2n) acyclic, 2n<=8", True, _out_all, "PUBLISHED", "outermost cups"),
        Check("Out(4) dimensions", {0: 2, 1: 3, 2: 1}, lambda: cupcx.build_out_complex(2).total_dims(), "DERIVED",
              "brute force"),
        Check("close_all_cups |S(2n,2q)| = |Out_q(2n)|, 2n<=8", True,
              lambda: all(len(cupcx.cell_basis(n, q)) == len(cupcx.out_basis(n, q))
                          == len({cupcx.close_all_cups(a) for a in cupcx.cell_basis(n, q)})
                          for n in range(5) for q in range(n + 1)), "DERIVED", "exhaustive"),
    ],
    "derived": [
        Check("DInn_0(4,2) acyclic, q<=3", True,
              lambda: all(s.is_zero for s in cupcx.derived_word_complex("DInn", 2, ZZ, i=1).homology(3)
                          .entries.values()), "PUBLISHED", "derived innermost cups"),
        Check("total DOut(4), degrees 0..3", ["Z", "0", "0", "0"], lambda: _dout(2), "PUBLISHED",
              "resolution of the ground ring"),
        Check("lifted-boundary coefficients (2,1),(2,2),(3,2)", [1, 2, 2],
              lambda: [cupcx.loop_class_witness(n, i).coefficient for n, i in ((2, 1), (2, 2), (3, 2))],
              "PUBLISHED", "multiplication by i times the loop class"),
    ],
    "routes": [
        Check("cobar(C_n) = M(2n;Z,0), n<=4, d<=8", True, _cobar_matches, "PUBLISHED", "cobar description"),
        Check("Ext over Q[y]/(y^3) matches M(4;Q,0), d<=9", True, lambda: _ext_matches_model(2), "PUBLISHED",
              "truncated polynomial Ext"),
        Check("Ext over Q[y]/(y^4) matches M(6;Q,0), d<=9", True, lambda: _ext_matches_model(3), "PUBLISHED",
              "truncated polynomial Ext"),
        Check("Bockstein homology dims for 2n=4, d<=7", [1, 1, 0, 0, 1, 1, 0, 0],
              lambda: dims_by_degree(bockstein_homology_2n4(7)), "PUBLISHED", "mod 2 Bockstein"),
        Check("Bockstein squares to zero", True, beta_squared_vanishes, "TRIVIAL", "derivation identity"),
    ],
}

SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, progress: Callable[[str], None] | None = None) -> list[CheckResult]:
    if name == "all":
        checks = [c for suite in SUITES.values() for c in suite]
    elif name in SUITES:
        checks = SUITES[name]
    else:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    results = []
    for check in checks:
        start = time.perf_counter()
        try:
            got = check.compute()
            res = CheckResult(check, got, got == check.expected, time.perf_counter() - start)
        except DifferentialError:
            raise
        except Exception as exc:  # a crashing check is a failed check, reported with its message
            res = CheckResult(check, None, False, time.perf_counter() - start, f"{type(exc).__name__}: {exc}")
        if progress:
            progress(res.line())
        results.append(res)
    return results
