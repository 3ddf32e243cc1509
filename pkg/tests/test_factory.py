import math
import random

import pytest

from monozeta.factory import (
    BlowupProgram,
    FamilyParameterError,
    ProgramError,
    build_from_program,
    corpus,
    family,
    family_params,
    fixture,
    intersection_matrix,
    parse_program,
    random_program,
    standard_form,
)
from monozeta.resolution import ResolutionFormatError, dumps
from monozeta.zeta import acampo_zeta, eigenvalue_report


def numerical(rd):
    return [(c.nu, c.N) for c in rd.components]


def euler_of_fibre(rd):
    """chi(pi^-1(0)) from the strata touching an exceptional curve."""
    exc = {c.id for c in rd.exceptional}
    return sum(st.chi_local for st in rd.strata if exc & set(st.components))


def test_cusp_program():
    rd = family("cusp").rd
    assert numerical(rd) == [(2, 2), (3, 3), (5, 6), (1, 1)]
    assert [rd.chi((f"E{i}",)) for i in (1, 2, 3)] == [1, 1, -1]
    assert dict(rd.axes) == {"x": "E1", "y": "E2"}


def test_ex28_numerical_data():
    rd = family("ex28").rd
    assert numerical(rd) == [(2, 4), (3, 6), (5, 12), (6, 14), (7, 15), (13, 30), (1, 1)]
    pairs = sorted(tuple(st.components) for st in rd.strata if len(st.components) == 2)
    assert pairs == [("E1", "E3"), ("E2", "E3"), ("E3", "E4"), ("E4", "E6"), ("E5", "E6"), ("E6", "S1")]
    assert eigenvalue_report(rd).eigenvalue_orders == (1, 6, 10, 12, 30)


def test_smooth_and_normal_crossing_families():
    rd = family("xn", N=5).rd
    assert numerical(rd) == [(1, 5)] and rd.chi(("S1",)) == 1
    rd = family("xy", d=2, N=2, Nprime=3).rd
    assert numerical(rd) == [(1, 4), (1, 6)] and rd.chi(("S1", "S2")) == 1


@pytest.mark.parametrize("p,q", [(p, q) for q in range(3, 10) for p in range(2, q) if math.gcd(p, q) == 1])
def test_pq_resolution(p, q):
    rd = family("pq", p=p, q=q).rd
    exc = rd.exceptional
    # the rupture component carries (p + q, pq)
    assert max(exc, key=lambda c: c.N).N == p * q
    assert [c for c in exc if c.N == p * q][0].nu == p + q
    # Milnor number (p-1)(q-1) via the degree of the monodromy zeta function
    assert acampo_zeta(rd).degree() == 1 - (p - 1) * (q - 1)
    expected = {d for d in range(1, p * q + 1) if (p * q) % d == 0 and p % d and q % d} | {1}
    assert set(eigenvalue_report(rd).eigenvalue_orders) == expected
    assert euler_of_fibre(rd) == len(exc) + 1
    x, y = rd.axis_host("x"), rd.axis_host("y")
    a = rd.curvette_matrix
    idx = rd.exceptional_index()
    # pullbacks of the axes: x vanishes to order p and y to order q on the rupture curve
    rupture = [c.id for c in exc if c.N == p * q][0]
    assert a[idx[x]][idx[rupture]] == p and a[idx[y]][idx[rupture]] == q


def test_program_document_round_trip():
    prog = family("ex28").program
    text = dumps(prog.to_doc())
    assert parse_program(text) == prog
    with pytest.raises(ResolutionFormatError):
        parse_program('{"centers": [{"J": ["X1"], "m": 1}]}')


def test_program_errors():
    with pytest.raises(ProgramError, match="satellite center on non-adjacent pair"):
        build_from_program(BlowupProgram.of([(), (1,), (1,), (2, 3)], [1, 1, 1, 1], [(4, 1)]))
    with pytest.raises(ProgramError, match="component not in divisor of f"):
        build_from_program(BlowupProgram.of([()], [0], [(1, 1)]))
    with pytest.raises(ProgramError, match="disagree"):
        build_from_program(BlowupProgram.of([()], [2], [(1, 1)]))


def test_single_blowup_matrix():
    assert intersection_matrix(BlowupProgram.of([()], [1], [(1, 1)])) == ((-1,),)


def test_family_parameter_errors():
    with pytest.raises(FamilyParameterError, match="gcd"):
        family("pq", p=2, q=4)
    with pytest.raises(FamilyParameterError, match="d >= 3"):
        family("fermat", d=2)
    with pytest.raises(FamilyParameterError, match="even"):
        family("morse", n=3)
    with pytest.raises(FamilyParameterError):
        family("nope")


def test_params_and_fixture_names():
    assert family_params("pq", "2,3") == {"p": 2, "q": 3}
    assert family_params("fermat", "d=4") == {"d": 4}
    with pytest.raises(FamilyParameterError):
        family_params("fermat", "e=4")
    assert fixture("pq-2-5").rd == family("pq", p=2, q=5).rd
    assert fixture("cusp").name == "pq-2-3"
    with pytest.raises(FamilyParameterError):
        fixture("pq-2")


def test_fermat_and_morse():
    for d in range(3, 7):
        rd = family("fermat", d=d).rd
        assert rd.chi(("E",)) == d * d - 3 * d + 3
        assert rd.chi(("E", "F")) == 3 * d - d * d
        assert acampo_zeta(rd).factors == {d: d * d - 3 * d + 3}
    rd = family("morse", n=4).rd
    assert numerical(rd) == [(4, 2), (1, 1)]


def test_corpus_names_are_unique_and_resolvable():
    names = [fx.name for fx in corpus()]
    assert len(names) == len(set(names))
    for name in names:
        assert fixture(name).name == name


def test_standard_forms():
    fx = family("xy", d=5, N=2, Nprime=3)
    w = standard_form(fx, 2)
    assert w.exponents() == {"S1": 3, "S2": 5}
    with pytest.raises(FamilyParameterError):
        standard_form(family("morse", n=2), 1)


def test_random_programs_are_trees_with_consistent_data():
    rng = random.Random(7)
    for _ in range(50):
        prog = random_program(rng)
        rd = build_from_program(prog)
        n = len(prog.centers)
        edges = [st for st in rd.strata if len(st.components) == 2 and all(c.startswith("E") for c in st.components)]
        assert len(edges) == n - 1
        assert euler_of_fibre(rd) == n + 1
