import random
from fractions import Fraction as F

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from monozeta.curvette import check_theorems, matmul
from monozeta.exact import RootOfUnity, frac_part
from monozeta.factory import build_from_program, intersection_matrix, random_program
from monozeta.realizer import collision_filter, residue_formula, shifted_nu, solve_congruence
from monozeta.resolution import FormSpec, FormTerm, parse, serialize
from monozeta.zeta import acampo_zeta, apply_form, strata_sum, topological_zeta

seeds = st.integers(min_value=0, max_value=10**9)


def program(seed, **kw):
    return random_program(random.Random(seed), **kw)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_curvette_theorems(seed):
    prog = program(seed)
    rd = build_from_program(prog)
    a = rd.curvette_matrix
    n = len(a)
    rep = check_theorems(a, 2)
    assert rep.passed and rep.symmetric
    minus_m = [[-x for x in r] for r in intersection_matrix(prog)]
    assert matmul(minus_m, a) == [[int(i == j) for j in range(n)] for i in range(n)]
    for j, c in enumerate(rd.exceptional):
        assert c.N == sum(b.mult * a[b.host - 1][j] for b in prog.branches)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_acampo_degree_identity(seed):
    rd = build_from_program(program(seed))
    z = acampo_zeta(rd)
    assert sum(n * e for n, e in z.factors.items()) == sum(rd.chi((c.id,)) * c.N for c in rd.components)


@settings(max_examples=40, deadline=None)
@given(seeds, st.lists(st.integers(0, 4), min_size=12, max_size=12), st.fractions(-3, 3, max_denominator=7))
def test_normalized_zeta_agrees_with_strata_sum(seed, exps, x):
    rd = build_from_program(program(seed, max_centers=8))
    w = FormSpec(tuple(FormTerm(c.id, e) for c, e in zip(rd.exceptional, exps) if e))
    twisted = apply_form(rd, None, w)
    z = topological_zeta(twisted)
    assume(all(c.nu + x * c.N != 0 for c in twisted.components))
    assert z.rf(x) == strata_sum(twisted, x)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_document_round_trip(seed):
    rd = build_from_program(program(seed))
    text = serialize(rd)
    assert parse(text) == rd and serialize(parse(text)) == text


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_congruence_solvable_on_curvette_columns(seed, data):
    rd = build_from_program(program(seed))
    a = rd.curvette_matrix
    j = data.draw(st.integers(0, len(a) - 1))
    c = rd.exceptional[j]
    d = data.draw(st.sampled_from([k for k in range(1, c.N + 1) if c.N % k == 0]))
    u = data.draw(st.integers(0, d - 1))
    base = solve_congruence([row[j] for row in a], c.nu, c.N, F(u, d))
    nu = shifted_nu(rd, a, base)[c.id]
    assert frac_part(F(-nu, c.N)) == F(u, d) % 1


@settings(max_examples=50, deadline=None)
@given(seeds, st.data())
def test_residue_formula_matches_laurent(seed, data):
    rd = build_from_program(program(seed, max_centers=7))
    candidates = [c.id for c in rd.exceptional]
    j0 = data.draw(st.sampled_from(candidates))
    m = data.draw(st.lists(st.integers(0, 6), min_size=len(candidates), max_size=len(candidates)))
    assume(collision_filter(rd, None, j0, m))
    N = rd.component(j0).N
    s0 = F(-shifted_nu(rd, rd.curvette_matrix, m)[j0], N)
    w = FormSpec(tuple(FormTerm(c, mi) for c, mi in zip(candidates, m) if mi))
    pole = topological_zeta(apply_form(rd, None, w)).pole(s0)
    r = residue_formula(rd, None, j0, m)
    assert (pole.leading if pole else 0) == r
    if pole:
        assert pole.order == 1


@given(st.fractions(-50, 50, max_denominator=60))
def test_root_of_unity_reduction(x):
    r = RootOfUnity.from_exponent(x)
    assert 0 <= r.turns < 1 and (x - r.turns).denominator == 1
    assert RootOfUnity.parse(str(r)) == r
