"""Curve resolution data from combinatorial blow-up programs, plus the named
example families (monomial curves, ``y^p - x^q``, a two-Puiseux-pair curve,
Fermat surfaces and Morse points)."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .curvette import curvette_matrix_2d
from .resolution import (
    Branch,
    Component,
    FormSpec,
    ResolutionData,
    ResolutionFormatError,
    Section,
    Stratum,
    monomial_form,
    require_valid,
)


class ProgramError(ValueError):
    pass


class FamilyParameterError(ValueError):
    pass


@dataclass(frozen=True)
class Center:
    """Centre of the i-th blow-up: lies on exactly the curves ``J`` (1-based),
    where the strict transform of ``f`` has multiplicity ``m``."""

    J: tuple[int, ...]
    m: int


@dataclass(frozen=True)
class ProgramBranch:
    host: Optional[int]
    mult: int


@dataclass(frozen=True)
class BlowupProgram:
    centers: tuple[Center, ...]
    branches: tuple[ProgramBranch, ...]

    @classmethod
    def of(cls, js: Sequence[Sequence[int]], ms: Sequence[int], branches: Sequence[tuple]) -> "BlowupProgram":
        return cls(
            tuple(Center(tuple(j), m) for j, m in zip(js, ms, strict=True)),
            tuple(ProgramBranch(h, r) for h, r in branches),
        )

    def to_doc(self) -> dict[str, Any]:
        return {
            "centers": [{"J": [f"E{j}" for j in c.J], "m": c.m} for c in self.centers],
            "branches": [{"host": None if b.host is None else f"E{b.host}", "mult": b.mult} for b in self.branches],
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "BlowupProgram":
        if not isinstance(doc, Mapping) or set(doc) - {"centers", "branches"} or "centers" not in doc:
            raise ResolutionFormatError("program: expected keys 'centers' and 'branches'")

        def idx(ref: Any, where: str) -> int:
            if isinstance(ref, int) and not isinstance(ref, bool):
                return ref
            if isinstance(ref, str) and ref.startswith("E") and ref[1:].isdigit():
                return int(ref[1:])
            raise ResolutionFormatError(f"{where}: bad component reference {ref!r}")

        centers = []
        for i, c in enumerate(doc["centers"]):
            if not isinstance(c, Mapping) or set(c) != {"J", "m"}:
                raise ResolutionFormatError(f"centers[{i}]: expected keys 'J' and 'm'")
            centers.append(Center(tuple(idx(j, f"centers[{i}].J") for j in c["J"]), int(c["m"])))
        branches = []
        for i, b in enumerate(doc.get("branches", [])):
            if not isinstance(b, Mapping) or set(b) != {"host", "mult"}:
                raise ResolutionFormatError(f"branches[{i}]: expected keys 'host' and 'mult'")
            host = None if b["host"] is None else idx(b["host"], f"branches[{i}].host")
            branches.append(ProgramBranch(host, int(b["mult"])))
        return cls(tuple(centers), tuple(branches))


def parse_program(text: str) -> BlowupProgram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ResolutionFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return BlowupProgram.from_doc(doc)


def _dual_graph(centers: Sequence[Center]) -> tuple[dict[frozenset, int], list[int]]:
    """Final exceptional adjacency (edge -> count) and later-centre counts."""
    edges: dict[frozenset, int] = {}
    later = [0] * len(centers)
    for i, c in enumerate(centers, start=1):
        if len(c.J) > 2:
            raise ProgramError(f"centre {i} lies on {len(c.J)} curves; at most 2 on a surface")
        if len(set(c.J)) != len(c.J):
            raise ProgramError(f"centre {i} repeats a curve")
        if not c.J and i > 1:
            raise ProgramError(f"centre {i} must lie on an exceptional curve")
        if c.J and i == 1:
            raise ProgramError("the first centre is the origin")
        for j in c.J:
            if not 1 <= j < i:
                raise ProgramError(f"centre {i} refers to E{j}, which does not exist yet")
            later[j - 1] += 1
        if len(c.J) == 2:
            pair = frozenset(c.J)
            if not edges.get(pair):
                raise ProgramError(f"satellite center on non-adjacent pair E{c.J[0]}, E{c.J[1]}")
            edges[pair] -= 1
            if not edges[pair]:
                del edges[pair]
        for j in c.J:
            key = frozenset((j, i))
            edges[key] = edges.get(key, 0) + 1
    return edges, later


def intersection_matrix(p: BlowupProgram) -> tuple[tuple[int, ...], ...]:
    """``E_i . E_j`` on the final surface."""
    edges, later = _dual_graph(p.centers)
    n = len(p.centers)
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        M[i][i] = -1 - later[i]
    for pair, k in edges.items():
        i, j = sorted(pair)
        M[i - 1][j - 1] = M[j - 1][i - 1] = k
    return tuple(tuple(r) for r in M)


def build_from_program(p: BlowupProgram, axes: Optional[Mapping[str, str]] = None) -> ResolutionData:
    n = len(p.centers)
    edges, _ = _dual_graph(p.centers)
    if not p.branches:
        raise ProgramError("program needs at least one branch")

    N: list[int] = []
    k: list[int] = []
    for i, c in enumerate(p.centers, start=1):
        if c.m < 0:
            raise ProgramError(f"centre {i} has negative multiplicity")
        N.append(c.m + sum(N[j - 1] for j in c.J))
        k.append(1 + sum(k[j - 1] for j in c.J))
        if N[-1] == 0:
            raise ProgramError(f"component not in divisor of f: E{i} has N = 0")

    comps = [Component(f"E{i}", "exceptional", N[i - 1], k[i - 1] + 1) for i in range(1, n + 1)]
    valence = [0] * n
    pairs: list[tuple[str, str, int]] = []
    for pair, cnt in sorted(edges.items(), key=lambda kv: sorted(kv[0])):
        i, j = sorted(pair)
        valence[i - 1] += cnt
        valence[j - 1] += cnt
        pairs.append((f"E{i}", f"E{j}", cnt))

    strict_ids = [f"S{b}" for b in range(1, len(p.branches) + 1)]
    for sid, b in zip(strict_ids, p.branches):
        if b.mult < 1:
            raise ProgramError(f"branch {sid} needs positive multiplicity")
        comps.append(Component(sid, "strict", b.mult, 1))
        if n == 0:
            if b.host is not None:
                raise ProgramError(f"branch {sid} hosted on E{b.host}, but nothing was blown up")
            continue
        if b.host is None or not 1 <= b.host <= n:
            raise ProgramError(f"branch {sid} needs an exceptional host in E1..E{n}")
        valence[b.host - 1] += 1
        pairs.append((f"E{b.host}", sid, 1))

    strata = [Stratum((f"E{i}",), 2 - valence[i - 1]) for i in range(1, n + 1)]
    if n == 0:
        # germs at the origin itself: one smooth branch, or two transverse ones
        if len(strict_ids) == 1:
            strata.append(Stratum((strict_ids[0],), 1))
        elif len(strict_ids) == 2:
            strata += [Stratum((strict_ids[0],), 0), Stratum((strict_ids[1],), 0),
                       Stratum(tuple(strict_ids), 1)]
        else:
            raise ProgramError("more than two branches through the origin are not normal crossings")
    else:
        strata += [Stratum((sid,), 0) for sid in strict_ids]
    strata += [Stratum((a, b), cnt) for a, b, cnt in pairs]

    matrix = curvette_matrix_2d(intersection_matrix(p)) if n else ()
    for j in range(n):
        # branches are curvettes of their hosts, so their pullbacks give N again
        expect = sum(b.mult * matrix[b.host - 1][j] for b in p.branches)
        if expect != N[j]:
            raise ProgramError(
                f"strict multiplicities disagree with the branches: E{j + 1} has N = {N[j]}, "
                f"branches give {expect}"
            )
    rd = ResolutionData(
        ambient_dim=2,
        components=tuple(comps),
        strata=tuple(strata),
        curvette_matrix=matrix,
        branches=tuple(Branch(None if b.host is None else f"E{b.host}", b.mult) for b in p.branches),
        axes=None if axes is None else tuple(sorted(axes.items())),
    )
    return require_valid(rd)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class Fixture:
    name: str
    rd: ResolutionData
    program: Optional[BlowupProgram] = None
    params: Mapping[str, int] = field(default_factory=dict)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise FamilyParameterError(msg)


def _monomial_curve_program(p: int, q: int) -> tuple[BlowupProgram, dict[str, str]]:
    """Minimal embedded resolution of ``y^p = x^q`` (coprime), tracking where
    the coordinate axes leave as curvettes."""
    a, b = p, q  # curve v^a = u^b in the running chart; u = x, v = y at first
    lab_u: tuple = ("axis", "x")
    lab_v: tuple = ("axis", "y")
    js: list[tuple[int, ...]] = []
    ms: list[int] = []
    axes: dict[str, str] = {}

    def depart(label: tuple, new: int) -> None:
        if label[0] == "axis":
            axes[label[1]] = f"E{new}"

    while True:
        exc = [lab[1] for lab in (lab_u, lab_v) if lab[0] == "exc"]
        if a == 1 and b == 1 and len(exc) == 1:
            host = exc[0]
            break
        if a == 1 and b > 1 and lab_v[0] != "exc" and lab_u[0] == "exc":
            host = lab_u[1]
            break
        if b == 1 and a > 1 and lab_u[0] != "exc" and lab_v[0] == "exc":
            host = lab_v[1]
            break
        new = len(js) + 1
        js.append(tuple(sorted(exc)))
        ms.append(min(a, b))
        if a < b:
            depart(lab_u, new)
            b -= a
            lab_u = ("exc", new)
        elif a > b:
            depart(lab_v, new)
            a -= b
            lab_v = ("exc", new)
        else:
            depart(lab_u, new)
            depart(lab_v, new)
            host = new
            break
    _need(set(axes) == {"x", "y"}, "coordinate axes are not curvettes of this resolution")
    return BlowupProgram.of(js, ms, [(host, 1)]), axes


def family(name: str, **params: int) -> Fixture:
    """Ready-made resolution data for the named example family."""
    name = name.lower()
    if name in ("xn", "smooth"):
        N = params.get("N", 1)
        _need(N >= 1, "xN family needs N >= 1")
        prog = BlowupProgram((), (ProgramBranch(None, N),))
        rd = build_from_program(prog, axes={"x": "S1"})
        return Fixture(f"xN-{N}", rd, prog, {"N": N})
    if name in ("xy", "normal-crossing"):
        d, N, Np = params.get("d", 1), params.get("N", 1), params.get("Nprime", 1)
        _need(min(d, N, Np) >= 1, "xy family needs positive d, N, Nprime")
        _need(math.gcd(N, Np) == 1, "xy family needs gcd(N, Nprime) = 1")
        prog = BlowupProgram((), (ProgramBranch(None, d * N), ProgramBranch(None, d * Np)))
        rd = build_from_program(prog, axes={"x": "S1", "y": "S2"})
        return Fixture(f"xy-{d}-{N}-{Np}", rd, prog, {"d": d, "N": N, "Nprime": Np})
    if name in ("pq", "cusp"):
        p, q = (2, 3) if name == "cusp" else (params.get("p", 0), params.get("q", 0))
        _need(2 <= p < q, "pq family needs 2 <= p < q")
        _need(math.gcd(p, q) == 1, "pq family needs gcd(p, q) = 1")
        prog, axes = _monomial_curve_program(p, q)
        return Fixture(f"pq-{p}-{q}", build_from_program(prog, axes=axes), prog, {"p": p, "q": q})
    if name == "ex28":
        prog = BlowupProgram.of(
            [(), (1,), (1, 2), (3,), (4,), (4, 5)],
            [4, 2, 2, 2, 1, 1],
            [(6, 1)],
        )
        return Fixture("ex28", build_from_program(prog, axes={"x": "E1", "y": "E2"}), prog, {})
    if name == "fermat":
        d = params.get("d", 0)
        _need(d >= 3, "fermat family needs d >= 3")
        return Fixture(f"fermat-{d}", _fermat(d), None, {"d": d})
    if name == "morse":
        n = params.get("n", 0)
        _need(n >= 2 and n % 2 == 0, "morse family needs even n >= 2")
        return Fixture(f"morse-{n}", _morse(n), None, {"n": n})
    raise FamilyParameterError(f"unknown family {name!r}")


def _fermat(d: int) -> ResolutionData:
    # one point blow-up of x^d + y^d + z^d: E = P^2 meets the strict
    # transform F in a smooth plane curve D of degree d; {x=0} cuts E in a
    # line L meeting D in d points
    chi_D = 3 * d - d * d
    return require_valid(ResolutionData(
        ambient_dim=3,
        components=(Component("E", "exceptional", d, 3), Component("F", "strict", 1, 1)),
        strata=(Stratum(("E",), 3 - chi_D), Stratum(("F",), 0), Stratum(("E", "F"), chi_D)),
        curvette_matrix=((1,),),
        branches=None,
        axes=(("x", "E"),),
        sections=(Section("E", (("E", 1),), ((("E",), 2 - d), (("E", "F"), d))),),
    ))


def _quadric_chi(k: int) -> int:
    """Euler characteristic of a smooth quadric of dimension ``k``."""
    return k + 2 if k % 2 == 0 else k + 1


def _morse(n: int) -> ResolutionData:
    chi_Q = _quadric_chi(n - 2)
    return require_valid(ResolutionData(
        ambient_dim=n,
        components=(Component("E", "exceptional", 2, n), Component("F", "strict", 1, 1)),
        strata=(Stratum(("E",), n - chi_Q), Stratum(("F",), 0), Stratum(("E", "F"), chi_Q)),
        curvette_matrix=((1,),),
        branches=None,
        axes=None,
        sections=None,
    ))


# ---------------------------------------------------------------------------
# random programs for property tests


def random_program(rng: random.Random, max_centers: int = 12, max_branches: int = 3) -> BlowupProgram:
    """A random valid program whose strict multiplicities are consistent
    with its branches being curvettes of their hosts."""
    n = rng.randint(1, max_centers)
    js: list[tuple[int, ...]] = [()]
    edges: set[frozenset] = set()
    for i in range(2, n + 1):
        if edges and rng.random() < 0.4:
            pair = rng.choice(sorted(tuple(sorted(e)) for e in edges))
            edges.discard(frozenset(pair))
            js.append(pair)
        else:
            js.append((rng.randint(1, i - 1),))
        for j in js[-1]:
            edges.add(frozenset((j, i)))
    branches = [(rng.randint(1, n), rng.randint(1, 3)) for _ in range(rng.randint(1, max_branches))]
    skeleton = BlowupProgram.of(js, [0] * n, [])
    a = curvette_matrix_2d(intersection_matrix(skeleton))
    ms = []
    for i in range(n):
        m = 0
        for host, r in branches:
            m += r * (a[host - 1][i] - sum(a[host - 1][j - 1] for j in js[i]))
        if m < 0:
            raise ProgramError("negative strict multiplicity in random program")
        ms.append(m)
    return BlowupProgram.of(js, ms, branches)


# ---------------------------------------------------------------------------
# named fixtures and their standard forms

_POSITIONAL = {
    "xn": ("N",), "smooth": ("N",),
    "xy": ("d", "N", "Nprime"), "normal-crossing": ("d", "N", "Nprime"),
    "pq": ("p", "q"), "cusp": (),
    "ex28": (),
    "fermat": ("d",),
    "morse": ("n",),
}


def family_params(name: str, text: str) -> dict[str, int]:
    """Parse ``"2,3"`` (positional) or ``"p=2,q=3"`` for the named family."""
    name = name.lower()
    if name not in _POSITIONAL:
        raise FamilyParameterError(f"unknown family {name!r}")
    keys = _POSITIONAL[name]
    out: dict[str, int] = {}
    parts = [t.strip() for t in text.split(",") if t.strip()] if text else []
    for pos, part in enumerate(parts):
        key, sep, value = part.partition("=")
        if not sep:
            if pos >= len(keys):
                raise FamilyParameterError(f"too many parameters for {name}")
            key, value = keys[pos], part
        key = key.strip()
        if key not in keys:
            raise FamilyParameterError(f"{name} takes parameters {', '.join(keys) or 'none'}, got {key!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise FamilyParameterError(f"parameter {key} must be an integer, got {value!r}") from None
    return out


def fixture(name: str) -> Fixture:
    """Look up a fixture by its corpus name, e.g. ``pq-2-5`` or ``fermat-4``."""
    head, *rest = name.split("-")
    if head in ("cusp", "ex28") and not rest:
        return family(head)
    try:
        values = [int(v) for v in rest]
    except ValueError:
        raise FamilyParameterError(f"unknown fixture {name!r}") from None
    keys = _POSITIONAL.get(head.lower())
    if not keys or len(values) != len(keys):
        raise FamilyParameterError(f"unknown fixture {name!r}")
    return family(head, **dict(zip(keys, values)))


def corpus() -> list[Fixture]:
    out = [family("xn", N=N) for N in range(1, 7)]
    out += [
        family("xy", d=d, N=N, Nprime=Np)
        for d in range(1, 4)
        for N in range(1, 7)
        for Np in range(1, 7)
        if math.gcd(N, Np) == 1
    ]
    out += [family("pq", p=p, q=q) for q in range(3, 8) for p in range(2, q) if math.gcd(p, q) == 1]
    out.append(family("ex28"))
    out += [family("fermat", d=d) for d in range(3, 7)]
    out += [family("morse", n=n) for n in (2, 4, 6)]
    return out


def form_arity(fx: Fixture) -> int:
    head = fx.name.split("-")[0]
    return {"xN": 1, "xy": 1, "fermat": 1, "pq": 2, "ex28": 2}.get(head, 0)


def standard_form(fx: Fixture, *idx: int) -> FormSpec:
    """The forms used with each family: ``x^(b-1)`` on ``x^N``,
    ``x^(bN-1) y^(bN'-1)`` on ``x^dN y^dN'``, ``x^(i-1) y^(j-1)`` on plane
    curves, and a generic linear form to the power ``i-1`` on Fermat surfaces."""
    head = fx.name.split("-")[0]
    arity = form_arity(fx)
    if not arity:
        raise FamilyParameterError(f"no standard forms on {fx.name}")
    if len(idx) != arity or any(i < 1 for i in idx):
        raise FamilyParameterError(f"{fx.name} forms take {arity} positive index(es), got {idx}")
    label = "omega_" + ",".join(map(str, idx))
    if head == "xy":
        (b,) = idx
        exps = {"x": b * fx.params["N"] - 1, "y": b * fx.params["Nprime"] - 1}
    elif arity == 1:
        exps = {"x": idx[0] - 1}
    else:
        exps = {"x": idx[0] - 1, "y": idx[1] - 1}
    return monomial_form(fx.rd, exps, label)
