"""Realize monodromy eigenvalues as poles of twisted topological zeta functions.

Given a target root of unity ``lambda`` of order ``d``, pick an exceptional
component ``E_j0`` with ``d | N_j0`` and nonzero (negative, on surfaces)
Euler characteristic, solve the linear congruence making the candidate pole
``s0 = -nu'_j0 / N_j0`` satisfy ``exp(2 pi i s0) = lambda``, and walk the
lattice of solutions until ``s0`` survives as a genuine pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Optional, Sequence

from .exact import RootOfUnity, format_rational, frac_part
from .resolution import FormSpec, FormTerm, ResolutionData, form_to_doc
from .zeta import ZetaResult, apply_form, eigenvalue_report, topological_zeta


class RealizationError(RuntimeError):
    pass


class NotRealizable(RealizationError):
    pass


class RadiusExhausted(RealizationError):
    def __init__(self, msg: str, tried: int, radius: int):
        super().__init__(msg)
        self.tried = tried
        self.radius = radius


class CongruenceError(ArithmeticError):
    pass


def _matrix(rd: ResolutionData, a: Optional[Sequence[Sequence[int]]]) -> Sequence[Sequence[int]]:
    a = rd.curvette_matrix if a is None else a
    if a is None or len(a) != len(rd.exceptional):
        raise RealizationError("curvette matrix missing or not sized to the exceptional components")
    return a


def _qualifies(rd: ResolutionData, cid: str) -> bool:
    chi = rd.chi((cid,))
    return chi < 0 if rd.ambient_dim == 2 else chi != 0


def select_component(rd: ResolutionData, d: int) -> str:
    """Exceptional component carrying eigenvalues of order ``d``.

    Ties go to the smallest ``N``, then declaration order.
    """
    divisible = [c for c in rd.exceptional if c.N % d == 0 and _qualifies(rd, c.id)]
    if not divisible and not (rd.strict_gcd and rd.strict_gcd % d == 0):
        raise NotRealizable(f"eigenvalue order {d} not realizable from this data")
    if not divisible:
        raise NotRealizable(
            f"eigenvalue order {d} not realizable from this data: no exceptional component qualifies"
        )
    return min(divisible, key=lambda c: c.N).id


def solve_congruence(coeffs: Sequence[int], nu: int, N: int, turns: Fraction) -> tuple[int, ...]:
    """Lexicographically smallest ``m >= 0`` with
    ``nu + sum(c*m) = -turns*N (mod N)``."""
    turns = Fraction(turns)
    if (turns * N).denominator != 1:
        raise CongruenceError(f"order {turns.denominator} does not divide {N}")
    if math.gcd(*coeffs) != 1:
        raise CongruenceError("coefficient gcd is not 1; curvette matrix is corrupted")
    rest = (int(-turns * N) - nu) % N
    out = []
    for i, c in enumerate(coeffs):
        g = math.gcd(*coeffs[i + 1:], N)
        mi = next((x for x in range(N) if (rest - c * x) % g == 0), None)
        if mi is None:
            raise CongruenceError("congruence has no solution")
        out.append(mi)
        rest = (rest - c * mi) % N
    return tuple(out)


def shifted_nu(rd: ResolutionData, a: Sequence[Sequence[int]], m: Sequence[int]) -> dict[str, int]:
    """``nu_i + sum_l a[l][i] m_l`` for every component (curvette hosts are the
    exceptional components, in order)."""
    exc = rd.exceptional
    out = {c.id: c.nu for c in rd.components}
    for i, c in enumerate(exc):
        out[c.id] += sum(a[l][i] * m[l] for l in range(len(exc)))
    return out


def collision_filter(rd: ResolutionData, a: Optional[Sequence[Sequence[int]]], j0: str, m: Sequence[int]) -> bool:
    """True iff the candidate pole of ``j0`` differs from every other one."""
    a = _matrix(rd, a)
    nu = shifted_nu(rd, a, m)
    Nj = rd.component(j0).N
    s0 = Fraction(-nu[j0], Nj)
    return all(Fraction(-nu[c.id], c.N) != s0 for c in rd.components if c.id != j0 and c.N >= 1)


def residue_formula(
    rd: ResolutionData, a: Optional[Sequence[Sequence[int]]], j0: str, m: Sequence[int], copies: int = 1
) -> Fraction:
    """Residue at ``s0`` of the zeta function twisted by ``m`` (one curvette
    per exceptional host, ``copies`` of them on ``E_j0``), from the local
    picture around ``E_j0`` alone."""
    if rd.ambient_dim != 2:
        raise RealizationError("residue formula is for surfaces")
    a = _matrix(rd, a)
    nu = shifted_nu(rd, a, m)
    Nj = rd.component(j0).N
    s0 = Fraction(-nu[j0], Nj)
    total = Fraction(rd.chi((j0,)))
    mj = m[[c.id for c in rd.exceptional].index(j0)]
    if mj or copies > 1:
        for mk in FormTerm(j0, mj, copies).split():
            total += Fraction(-1) + Fraction(1, 1 + mk)
    for other, count in rd.neighbours(j0):
        c = rd.component(other)
        alpha = nu[other] + s0 * c.N
        if alpha == 0:
            raise RealizationError(f"collision at neighbor {other}")
        total += Fraction(count) / alpha
    return total / Nj


def graded_lex(n: int, K: int) -> Iterator[tuple[int, ...]]:
    """All of ``{0..K}^n``, by total degree, then lexicographically."""

    def comps(total: int, slots: int) -> Iterator[tuple[int, ...]]:
        if slots == 0:
            if total == 0:
                yield ()
            return
        for first in range(max(0, total - K * (slots - 1)), min(K, total) + 1):
            for tail in comps(total - first, slots - 1):
                yield (first,) + tail

    for total in range(n * K + 1):
        yield from comps(total, n)


@dataclass(frozen=True)
class RealizationCertificate:
    target: RootOfUnity
    j0: str
    form: FormSpec
    s0: Fraction
    pole_order: int
    residue: Fraction
    zeta: ZetaResult
    tried: int
    radius: int

    def to_json(self) -> dict[str, Any]:
        return {
            "target": str(self.target),
            "j0": self.j0,
            "form": form_to_doc(self.form),
            "s0": format_rational(self.s0),
            "pole_order": self.pole_order,
            "residue": format_rational(self.residue),
            "zeta": self.zeta.to_json(),
            "search_stats": {"candidates": self.tried, "radius": self.radius},
        }


def _form_from_vector(hosts: Sequence[str], m: Sequence[int], j0: str | None = None, copies: int = 1) -> FormSpec:
    terms = []
    for host, mi in zip(hosts, m):
        if host == j0 and copies > 1:
            terms.append(FormTerm(host, mi, copies))
        elif mi:
            terms.append(FormTerm(host, mi))
    return FormSpec(tuple(terms))


def realize(rd: ResolutionData, a: Optional[Sequence[Sequence[int]]], target: RootOfUnity, K: int = 4) -> RealizationCertificate:
    d = target.order
    if d not in eigenvalue_report(rd).eigenvalue_orders:
        raise NotRealizable(f"{target} (order {d}) is not a monodromy eigenvalue of this data")
    try:
        j0 = select_component(rd, d)
    except NotRealizable:
        return _realize_on_strict(rd, target, K)
    a = _matrix(rd, a)

    exc = [c.id for c in rd.exceptional]
    j = exc.index(j0)
    Nj = rd.component(j0).N
    column = [a[l][j] for l in range(len(exc))]
    base = solve_congruence(column, rd.component(j0).nu, Nj, target.turns)

    tried = 0
    residue_failures = 0
    max_copies = rd.ambient_dim if rd.ambient_dim == 2 else 1
    for copies in range(1, max_copies + 1):
        if copies > 1 and not residue_failures:
            break
        for k in graded_lex(len(exc), K):
            m = [b + Nj * ki for b, ki in zip(base, k)]
            if copies > 1 and m[j] == 0:
                continue
            if not collision_filter(rd, a, j0, m):
                continue
            tried += 1
            form = _form_from_vector(exc, m, j0, copies)
            nu_j0 = shifted_nu(rd, a, m)[j0]
            s0 = Fraction(-nu_j0, Nj)
            zeta = topological_zeta(apply_form(rd, a, form))
            pole = zeta.pole(s0)
            if pole is None:
                residue_failures += 1
                continue
            return RealizationCertificate(target, j0, form, s0, pole.order, pole.leading, zeta, tried, K)
    raise RadiusExhausted(f"search radius exhausted after {tried} candidates (K={K})", tried, K)


def _realize_on_strict(rd: ResolutionData, target: RootOfUnity, K: int) -> RealizationCertificate:
    # normal-crossings and Morse situations: no exceptional component has the
    # right Euler characteristic, so twist by the equation of a component of f
    d = target.order
    hosts = sorted((c for c in rd.strict if c.N % d == 0), key=lambda c: c.N)
    if not hosts:
        raise NotRealizable(f"eigenvalue order {d} not realizable from this data")
    host = hosts[0]
    (base,) = solve_congruence([1], host.nu, host.N, target.turns)
    tried = 0
    for k in range(K + 1):
        mi = base + host.N * k
        tried += 1
        form = FormSpec((FormTerm(host.id, mi),) if mi else ())
        s0 = Fraction(-(host.nu + mi), host.N)
        zeta = topological_zeta(apply_form(rd, None, form))
        pole = zeta.pole(s0)
        if pole is not None:
            return RealizationCertificate(target, host.id, form, s0, pole.order, pole.leading, zeta, tried, K)
    raise RadiusExhausted(f"search radius exhausted after {tried} candidates (K={K})", tried, K)


def verify_certificate(rd: ResolutionData, cert: RealizationCertificate) -> list[str]:
    """Recompute everything behind ``cert``; returns the list of failures."""
    problems = []
    zeta = topological_zeta(apply_form(rd, None, cert.form))
    pole = zeta.pole(cert.s0)
    if pole is None:
        problems.append(f"{format_rational(cert.s0)} is not a pole")
    else:
        if pole.order != cert.pole_order:
            problems.append(f"pole order {pole.order} != {cert.pole_order}")
        if pole.leading != cert.residue:
            problems.append(f"leading coefficient {pole.leading} != {cert.residue}")
    if frac_part(cert.s0) != cert.target.turns:
        problems.append(f"exp class {frac_part(cert.s0)} != target {cert.target}")
    if zeta.rf != cert.zeta.rf:
        problems.append("zeta function differs on recomputation")
    return problems


# ---------------------------------------------------------------------------
# the poles-versus-eigenvalues principle for a finite family of forms


@dataclass(frozen=True)
class PrincipleReport:
    eigenvalue_orders: tuple[int, ...]
    stray_poles: tuple[tuple[str, Fraction], ...]
    witnesses: tuple[tuple[Fraction, str, Fraction], ...]
    missing: tuple[Fraction, ...]

    @property
    def poles_are_eigenvalues(self) -> bool:
        return not self.stray_poles

    @property
    def eigenvalues_are_hit(self) -> bool:
        return not self.missing

    @property
    def holds(self) -> bool:
        return self.poles_are_eigenvalues and self.eigenvalues_are_hit

    def to_json(self) -> dict[str, Any]:
        return {
            "eigenvalue_orders": list(self.eigenvalue_orders),
            "poles_are_eigenvalues": self.poles_are_eigenvalues,
            "eigenvalues_are_hit": self.eigenvalues_are_hit,
            "stray_poles": [[label, format_rational(s0)] for label, s0 in self.stray_poles],
            "witnesses": [
                {"eigenvalue": format_rational(t), "form": label, "s0": format_rational(s0)}
                for t, label, s0 in self.witnesses
            ],
            "missing": [format_rational(t) for t in self.missing],
        }


def eigenvalue_turns(orders: Sequence[int]) -> list[Fraction]:
    return sorted(Fraction(u, d) for d in orders for u in range(d) if math.gcd(u, d) == 1)


def verify_principle(rd: ResolutionData, a: Optional[Sequence[Sequence[int]]], forms: Sequence[FormSpec]) -> PrincipleReport:
    orders = eigenvalue_report(rd).eigenvalue_orders
    wanted = eigenvalue_turns(orders)
    stray: list[tuple[str, Fraction]] = []
    witness: dict[Fraction, tuple[str, Fraction]] = {}
    for w in forms:
        label = str(w)
        for pole in topological_zeta(apply_form(rd, a, w)).poles:
            t = frac_part(pole.s0)
            if t.denominator not in orders:
                stray.append((label, pole.s0))
            witness.setdefault(t, (label, pole.s0))
    hits = tuple((t, *witness[t]) for t in wanted if t in witness)
    missing = tuple(t for t in wanted if t not in witness)
    return PrincipleReport(tuple(orders), tuple(stray), hits, missing)
