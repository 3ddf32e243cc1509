"""Monodromy and topological zeta functions of resolution data, and twisting
by differential forms built from curvettes."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Optional, Sequence

from .exact import (
    CyclotomicDivisor,
    Poly,
    RationalFunction,
    cyc_order_at,
    divisors,
    format_poly,
    format_rational,
    rf_laurent_leading,
)
from .resolution import Component, FormSpec, ResolutionData, Stratum, validate


class ZetaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# monodromy


def acampo_zeta(rd: ResolutionData) -> CyclotomicDivisor:
    acc: dict[int, int] = {}
    for c in rd.components:
        if c.N < 1:
            continue
        chi = rd.chi((c.id,))
        if chi:
            acc[c.N] = acc.get(c.N, 0) + chi
    return CyclotomicDivisor(acc)


@dataclass(frozen=True)
class EigenvalueReport:
    zeta: CyclotomicDivisor
    orders: tuple[tuple[int, int], ...]
    eigenvalue_orders: tuple[int, ...]

    def order(self, d: int) -> int:
        return dict(self.orders).get(d, 0)

    def to_json(self) -> dict[str, Any]:
        return {
            "zeta": self.zeta.to_json(),
            "orders": [[d, o] for d, o in self.orders],
            "eigenvalue_orders": list(self.eigenvalue_orders),
        }


def eigenvalue_report(rd: ResolutionData) -> EigenvalueReport:
    z = acampo_zeta(rd)
    ds = sorted({d for c in rd.components if c.N >= 1 for d in divisors(c.N)})
    orders = tuple((d, cyc_order_at(z, d)) for d in ds)
    eig = {d for d, o in orders if o}
    if rd.strict_gcd:
        # eigenvalues on H^0 of the Milnor fibre
        eig.update(divisors(rd.strict_gcd))
    return EigenvalueReport(z, orders, tuple(sorted(eig)))


# ---------------------------------------------------------------------------
# forms


def _fresh_ids(rd: ResolutionData, count: int, prefix: str = "C") -> list[str]:
    taken = {c.id for c in rd.components}
    out, k = [], 1
    while len(out) < count:
        cid = f"{prefix}{k}"
        if cid not in taken:
            out.append(cid)
        k += 1
    return out


def _shift_row(rd: ResolutionData, a: Sequence[Sequence[int]], host: Component) -> dict[str, int]:
    """Pullback multiplicities of the hypersurface behind a form term."""
    exc = rd.exceptional
    idx = {c.id: i for i, c in enumerate(exc)}
    if host.kind == "exceptional":
        if rd.ambient_dim > 2:
            sec = rd.section_for(host.id)
            if sec is None:
                raise ZetaError(f"no hypersurface section recorded for {host.id!r} in dimension {rd.ambient_dim}")
            return dict(sec.row)
        if len(a) != len(exc) or host.id not in idx:
            raise ZetaError("curvette matrix does not cover the exceptional components")
        row = a[idx[host.id]]
        return {c.id: row[i] for i, c in enumerate(exc)}
    if host.kind == "strict":
        shift = {host.id: 1}
        if rd.branches is not None:
            b = rd.branches[[c.id for c in rd.strict].index(host.id)]
            if b.host is not None:
                row = a[idx[b.host]]
                shift.update({c.id: row[i] for i, c in enumerate(exc)})
            return shift
        if len(rd.strict) != 1:
            raise ZetaError("strict-hosted form terms need branch data when f has several components")
        for c in exc:
            if c.N % host.N:
                raise ZetaError(f"cannot split multiplicity of {c.id!r} among strict components")
            shift[c.id] = c.N // host.N
        return shift
    raise ZetaError(f"form term hosted on {host.kind} component {host.id!r}")


def apply_form(rd: ResolutionData, a: Optional[Sequence[Sequence[int]]], w: FormSpec) -> ResolutionData:
    """Twist by ``w``: shift every ``nu`` by the pullback of the form's
    factors, and add one component with ``N = 0`` per curvette copy."""
    if a is None:
        a = rd.curvette_matrix or ()
    nu = {c.id: c.nu for c in rd.components}
    comps = list(rd.components)
    strata = {st.key: st for st in rd.strata}
    order = [st.key for st in rd.strata]

    def bump(ids: Sequence[str], delta: int) -> None:
        key = frozenset(ids)
        if key in strata:
            st = strata[key]
            strata[key] = replace(st, chi_local=st.chi_local + delta)
        else:
            strata[key] = Stratum(tuple(ids), delta)
            order.append(key)

    for term in w.terms:
        if not rd.has_component(term.host):
            raise ZetaError(f"form term hosted on unknown component {term.host!r}")
        host = rd.component(term.host)
        if term.m < 0 or term.copies < 1:
            raise ZetaError("form terms need m >= 0 and copies >= 1")
        for cid, k in _shift_row(rd, a, host).items():
            nu[cid] += k * term.m
        if host.kind == "strict":
            if term.copies != 1:
                raise ZetaError("strict-hosted form terms take a single copy")
            continue
        if rd.ambient_dim > 2:
            if term.copies != 1:
                raise ZetaError("multi-copy forms in dimension > 2 need intersection data")
            if any(c.kind == "curvette" for c in comps):
                raise ZetaError("section profiles only describe the untwisted data")
            (new,) = _fresh_ids(replace(rd, components=tuple(comps)), 1, prefix="H")
            comps.append(Component(new, "curvette", 0, term.m + 1))
            bump((new,), 0)
            for ids, chi in rd.section_for(host.id).profile:
                bump(ids, -chi)
                bump(tuple(ids) + (new,), chi)
            continue
        ids = _fresh_ids(replace(rd, components=tuple(comps)), term.copies)
        for cid, mk in zip(ids, term.split()):
            comps.append(Component(cid, "curvette", 0, mk + 1))
            bump((host.id,), -1)
            bump((host.id, cid), 1)
            bump((cid,), 0)

    comps = [replace(c, nu=nu[c.id]) if c.id in nu else c for c in comps]
    return replace(rd, components=tuple(comps), strata=tuple(strata[k] for k in order))


# ---------------------------------------------------------------------------
# topological zeta function


def _stratum_weights(rd: ResolutionData, local: bool) -> list[tuple[int, Stratum]]:
    out = []
    for st in rd.strata:
        if local:
            chi = st.chi_local
        else:
            if st.chi_global is None:
                raise ZetaError(f"missing chi_global on stratum {{{','.join(st.components)}}}")
            chi = st.chi_global
        if chi:
            out.append((chi, st))
    return out


def strata_sum(rd: ResolutionData, s: Fraction, local: bool = True) -> Fraction:
    """Direct evaluation of the defining sum at ``s`` (no simplification)."""
    total = Fraction(0)
    for chi, st in _stratum_weights(rd, local):
        term = Fraction(chi)
        for cid in st.components:
            c = rd.component(cid)
            term /= c.nu + s * c.N
        total += term
    return total


@dataclass(frozen=True)
class Pole:
    s0: Fraction
    order: int
    leading: Fraction

    def to_json(self) -> dict[str, Any]:
        return {"s0": format_rational(self.s0), "order": self.order, "leading": format_rational(self.leading)}


@dataclass(frozen=True)
class ZetaResult:
    rf: RationalFunction
    factored_denominator: tuple[tuple[int, int], ...]
    poles: tuple[Pole, ...]

    def pole(self, s0: Fraction) -> Optional[Pole]:
        for p in self.poles:
            if p.s0 == s0:
                return p
        return None

    def display(self) -> str:
        """Integer numerator over a constant times products of ``(nu + N s)``."""
        num = self.rf.num
        factors = []
        for p in self.poles:
            nu, N = -p.s0.numerator, p.s0.denominator
            num = num * (Fraction(N) ** p.order)
            lin = format_poly(Poly.linear(nu, N))
            factors.append(f"({lin})" + ("" if p.order == 1 else f"^{p.order}"))
        if num.is_zero():
            return "0"
        prim = Poly(num.integer_primitive())
        content = num.lead / prim.lead
        top = format_poly(prim.scale(content.numerator))
        if content.denominator != 1:
            factors.insert(0, str(content.denominator))
        if not factors:
            return top
        if prim.degree > 0:
            top = f"({top})"
        bottom = "".join(factors)
        return f"{top}/{bottom}" if len(factors) == 1 else f"{top}/({bottom})"

    def to_json(self) -> dict[str, Any]:
        return {
            "rf": self.rf.to_json(),
            "factored_denominator": [[nu, N] for nu, N in self.factored_denominator],
            "display": self.display(),
            "poles": [p.to_json() for p in self.poles],
        }


def topological_zeta(rd: ResolutionData, local: bool = True) -> ZetaResult:
    problems = validate(rd)
    if problems:
        raise ZetaError("; ".join(problems))
    weighted = _stratum_weights(rd, local)

    # common denominator over roots -nu/N; N = 0 factors are constants
    per_stratum = []
    maxmult: dict[Fraction, int] = {}
    for chi, st in weighted:
        coef = Fraction(chi)
        roots: dict[Fraction, int] = {}
        for cid in st.components:
            c = rd.component(cid)
            if c.N == 0:
                coef /= c.nu
            else:
                coef /= c.N
                r = Fraction(-c.nu, c.N)
                roots[r] = roots.get(r, 0) + 1
        for r, k in roots.items():
            maxmult[r] = max(maxmult.get(r, 0), k)
        per_stratum.append((coef, roots))

    num = Poly()
    for coef, roots in per_stratum:
        term = Poly.const(coef)
        for r, e in maxmult.items():
            term = term * (Poly((-r, 1)) ** (e - roots.get(r, 0)))
        num = num + term

    if num.is_zero():
        rf = RationalFunction(Poly(), Poly.const(1))
        remaining: dict[Fraction, int] = {}
    else:
        remaining = {}
        for r, e in sorted(maxmult.items()):
            while e and num(r) == 0:
                num = num.deflate(r)
                e -= 1
            if e:
                remaining[r] = e
        den = Poly.const(1)
        for r, e in sorted(remaining.items()):
            den = den * (Poly((-r, 1)) ** e)
        rf = RationalFunction(num, den)

    poles = tuple(Pole(r, e, rf_laurent_leading(rf, r, e)) for r, e in sorted(remaining.items()))
    factored = tuple((c.nu, c.N) for c in rd.components if c.N >= 1)
    return ZetaResult(rf, factored, poles)


