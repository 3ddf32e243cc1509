"""Decorated resolution data, differential-form specifications and their
on-disk documents (``.resdata`` and ``.form``)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional

KINDS = ("exceptional", "strict", "curvette")


class ResolutionFormatError(ValueError):
    """A document does not follow the resolution-data grammar."""


@dataclass(frozen=True)
class Component:
    id: str
    kind: str
    N: int
    nu: int

    @property
    def is_exceptional(self) -> bool:
        return self.kind == "exceptional"


@dataclass(frozen=True)
class Stratum:
    """Points lying on exactly ``components``, with their Euler characteristic.

    ``chi_local`` is taken inside the fibre over the base point, ``chi_global``
    on the whole space (optional).
    """

    components: tuple[str, ...]
    chi_local: int
    chi_global: Optional[int] = None

    @property
    def key(self) -> frozenset:
        return frozenset(self.components)


@dataclass(frozen=True)
class Branch:
    """A strict-transform branch of multiplicity ``mult``, attached as a
    curvette of exceptional ``host`` (``None`` when nothing was blown up)."""

    host: Optional[str]
    mult: int


@dataclass(frozen=True)
class Section:
    """Generic hypersurface hosted on an exceptional component, for
    ambient dimension > 2 where its position cannot be inferred.

    ``row`` gives its pullback multiplicity along each exceptional component;
    ``profile`` lists, per existing stratum, the Euler characteristic of the
    part of that stratum (inside the fibre over 0) cut out by the hypersurface.
    """

    host: str
    row: tuple[tuple[str, int], ...]
    profile: tuple[tuple[tuple[str, ...], int], ...]


@dataclass(frozen=True)
class ResolutionData:
    ambient_dim: int
    components: tuple[Component, ...]
    strata: tuple[Stratum, ...]
    curvette_matrix: Optional[tuple[tuple[int, ...], ...]] = None
    branches: Optional[tuple[Branch, ...]] = None
    axes: Optional[tuple[tuple[str, str], ...]] = None
    sections: Optional[tuple[Section, ...]] = None

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def has_component(self, cid: str) -> bool:
        return any(c.id == cid for c in self.components)

    @property
    def exceptional(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.kind == "exceptional")

    @property
    def strict(self) -> tuple[Component, ...]:
        return tuple(c for c in self.components if c.kind == "strict")

    @property
    def strict_gcd(self) -> int:
        """gcd of N over the strict components (0 if there are none)."""
        return math.gcd(*(c.N for c in self.strict)) if self.strict else 0

    def stratum(self, ids: Iterable[str]) -> Optional[Stratum]:
        key = frozenset(ids)
        for st in self.strata:
            if st.key == key:
                return st
        return None

    def chi(self, ids: Iterable[str]) -> int:
        st = self.stratum(ids)
        return 0 if st is None else st.chi_local

    def neighbours(self, cid: str) -> list[tuple[str, int]]:
        """Components meeting ``cid`` inside the fibre, with point counts."""
        out = []
        for st in self.strata:
            if len(st.components) == 2 and cid in st.components and st.chi_local:
                other = st.components[0] if st.components[1] == cid else st.components[1]
                out.append((other, st.chi_local))
        return out

    def axis_host(self, name: str) -> str:
        for axis, host in self.axes or ():
            if axis == name:
                return host
        raise KeyError(f"no host recorded for coordinate axis {name!r}")

    def section_for(self, host: str) -> Optional[Section]:
        for sec in self.sections or ():
            if sec.host == host:
                return sec
        return None

    def exceptional_index(self) -> dict[str, int]:
        return {c.id: i for i, c in enumerate(self.exceptional)}


@dataclass(frozen=True)
class FormTerm:
    """Factor ``g^m`` of the form, ``g`` hosted on ``host``.

    With ``copies = t > 1`` the exponent ``m`` is spread over ``t`` generic
    copies of the hypersurface, remainders going to earlier copies.
    """

    host: str
    m: int
    copies: int = 1

    def split(self) -> list[int]:
        q, r = divmod(self.m, self.copies)
        return [q + 1 if k < r else q for k in range(self.copies)]


@dataclass(frozen=True)
class FormSpec:
    """The form ``(prod g^m) dx_1 ^ ... ^ dx_n``; no terms means the volume form."""

    terms: tuple[FormTerm, ...] = ()
    label: Optional[str] = field(default=None, compare=False)

    def merged(self, other: "FormSpec") -> "FormSpec":
        return FormSpec(self.terms + other.terms)

    def exponents(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.terms:
            out[t.host] = out.get(t.host, 0) + t.m
        return out

    def __str__(self) -> str:
        if self.label:
            return self.label
        if not self.terms:
            return "dx"
        return "*".join(f"g[{t.host}]^{t.m}" + (f"x{t.copies}" if t.copies > 1 else "") for t in self.terms)


def monomial_form(rd: ResolutionData, exponents: Mapping[str, int], label: str | None = None) -> FormSpec:
    """``prod axis^e * dx`` encoded on the axis hosts recorded in ``rd``."""
    terms = []
    for axis, e in exponents.items():
        if e < 0:
            raise ValueError(f"negative exponent for {axis}")
        if e:
            terms.append(FormTerm(rd.axis_host(axis), e))
    return FormSpec(tuple(terms), label=label)


# ---------------------------------------------------------------------------
# validation


def validate(rd: ResolutionData) -> list[str]:
    """All invariant violations of ``rd``; empty when the data is consistent."""
    problems: list[str] = []
    if rd.ambient_dim < 1:
        problems.append(f"ambient_dim must be positive, got {rd.ambient_dim}")
    ids = [c.id for c in rd.components]
    seen: set[str] = set()
    for cid in ids:
        if cid in seen:
            problems.append(f"duplicate component id {cid!r}")
        seen.add(cid)
    for c in rd.components:
        if c.kind not in KINDS:
            problems.append(f"component {c.id!r} has unknown kind {c.kind!r}")
        elif c.kind == "curvette" and c.N != 0:
            problems.append(f"curvette with nonzero N: {c.id!r} has N={c.N}")
        elif c.kind != "curvette" and c.N < 1:
            problems.append(f"{c.kind} component {c.id!r} needs N >= 1, got {c.N}")
        if c.nu < 1:
            problems.append(f"component {c.id!r} needs nu >= 1, got {c.nu}")

    keys: set[frozenset] = set()
    for st in rd.strata:
        label = "{" + ",".join(st.components) + "}"
        if st.key in keys:
            problems.append(f"duplicate stratum {label}")
        keys.add(st.key)
        if len(st.key) != len(st.components):
            problems.append(f"stratum {label} repeats a component")
        for cid in st.components:
            if cid not in seen:
                problems.append(f"stratum {label} references unknown component {cid!r}")
        if not st.components:
            if st.chi_local != 0 or st.chi_global is None:
                problems.append("empty stratum only carries a global Euler characteristic")
        if rd.ambient_dim == 2:
            if len(st.components) > 2:
                problems.append(f"stratum {label} has more than two components in dimension 2")
            if len(st.components) == 2 and st.chi_local < 1:
                problems.append(f"double-point stratum {label} needs a positive point count")

    if rd.curvette_matrix is not None:
        m = len(rd.exceptional)
        if len(rd.curvette_matrix) != m or any(len(r) != m for r in rd.curvette_matrix):
            problems.append(f"curvette_matrix must be {m}x{m} over the exceptional components")

    if rd.branches is not None:
        if len(rd.branches) != len(rd.strict):
            problems.append("branches must pair one-to-one with strict components")
        for b, s in zip(rd.branches, rd.strict):
            if b.host is not None and (not rd.has_component(b.host) or not rd.component(b.host).is_exceptional):
                problems.append(f"branch of {s.id!r} hosted on non-exceptional {b.host!r}")
            if b.mult != s.N:
                problems.append(f"branch multiplicity {b.mult} differs from N={s.N} of {s.id!r}")

    for axis, host in rd.axes or ():
        if host not in seen:
            problems.append(f"axis {axis!r} hosted on unknown component {host!r}")

    for sec in rd.sections or ():
        if sec.host not in seen:
            problems.append(f"section hosted on unknown component {sec.host!r}")
        for cid, _ in sec.row:
            if cid not in seen:
                problems.append(f"section row references unknown component {cid!r}")
        for comps, _ in sec.profile:
            if rd.stratum(comps) is None:
                problems.append(f"section profile references missing stratum {{{','.join(comps)}}}")
    return problems


def require_valid(rd: ResolutionData) -> ResolutionData:
    problems = validate(rd)
    if problems:
        raise ResolutionFormatError("; ".join(problems))
    return rd


# ---------------------------------------------------------------------------
# documents


def to_doc(rd: ResolutionData) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "ambient_dim": rd.ambient_dim,
        "components": [{"id": c.id, "kind": c.kind, "N": c.N, "nu": c.nu} for c in rd.components],
        "strata": [],
    }
    for st in rd.strata:
        entry: dict[str, Any] = {"components": list(st.components), "chi_local": st.chi_local}
        if st.chi_global is not None:
            entry["chi_global"] = st.chi_global
        doc["strata"].append(entry)
    if rd.curvette_matrix is not None:
        doc["curvette_matrix"] = [list(r) for r in rd.curvette_matrix]
    if rd.branches is not None:
        doc["branches"] = [{"host": b.host, "mult": b.mult} for b in rd.branches]
    if rd.axes is not None:
        doc["axes"] = dict(rd.axes)
    if rd.sections is not None:
        doc["sections"] = [
            {
                "host": s.host,
                "row": [[cid, k] for cid, k in s.row],
                "profile": [{"components": list(c), "chi_local": x} for c, x in s.profile],
            }
            for s in rd.sections
        ]
    return doc


def dumps(doc: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize(rd: ResolutionData) -> str:
    return dumps(to_doc(rd))


def _expect(doc: Mapping, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(doc, Mapping):
        raise ResolutionFormatError(f"{where}: expected an object")
    unknown = set(doc) - allowed
    if unknown:
        raise ResolutionFormatError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise ResolutionFormatError(f"{where}: missing keys {sorted(missing)}")


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ResolutionFormatError(f"{where}: expected an integer, got {v!r}")
    return v


def _str(v: Any, where: str) -> str:
    if not isinstance(v, str):
        raise ResolutionFormatError(f"{where}: expected a string, got {v!r}")
    return v


def from_doc(doc: Mapping) -> ResolutionData:
    _expect(
        doc,
        {"ambient_dim", "components", "strata", "curvette_matrix", "branches", "axes", "sections"},
        {"ambient_dim", "components", "strata"},
        "document",
    )
    comps = []
    for i, c in enumerate(doc["components"]):
        where = f"components[{i}]"
        _expect(c, {"id", "kind", "N", "nu"}, {"id", "kind", "N", "nu"}, where)
        kind = _str(c["kind"], f"{where}.kind")
        if kind not in KINDS:
            raise ResolutionFormatError(f"{where}.kind: unknown kind {kind!r}")
        comps.append(Component(_str(c["id"], f"{where}.id"), kind, _int(c["N"], f"{where}.N"), _int(c["nu"], f"{where}.nu")))
    ids = {c.id for c in comps}

    def ref(cid: Any, where: str) -> str:
        cid = _str(cid, where)
        if cid not in ids:
            raise ResolutionFormatError(f"{where}: unknown component {cid!r}")
        return cid

    strata = []
    for i, s in enumerate(doc["strata"]):
        where = f"strata[{i}]"
        _expect(s, {"components", "chi_local", "chi_global"}, {"components", "chi_local"}, where)
        members = tuple(ref(cid, f"{where}.components") for cid in s["components"])
        chi_g = s.get("chi_global")
        strata.append(Stratum(members, _int(s["chi_local"], f"{where}.chi_local"),
                              None if chi_g is None else _int(chi_g, f"{where}.chi_global")))

    matrix = None
    if "curvette_matrix" in doc:
        matrix = tuple(tuple(_int(x, "curvette_matrix") for x in row) for row in doc["curvette_matrix"])

    branches = None
    if "branches" in doc:
        branches = []
        for i, b in enumerate(doc["branches"]):
            where = f"branches[{i}]"
            _expect(b, {"host", "mult"}, {"host", "mult"}, where)
            host = None if b["host"] is None else ref(b["host"], f"{where}.host")
            branches.append(Branch(host, _int(b["mult"], f"{where}.mult")))
        branches = tuple(branches)

    axes = None
    if "axes" in doc:
        if not isinstance(doc["axes"], Mapping):
            raise ResolutionFormatError("axes: expected an object")
        axes = tuple((str(k), ref(v, f"axes.{k}")) for k, v in sorted(doc["axes"].items()))

    sections = None
    if "sections" in doc:
        sections = []
        for i, s in enumerate(doc["sections"]):
            where = f"sections[{i}]"
            _expect(s, {"host", "row", "profile"}, {"host", "row", "profile"}, where)
            row = tuple((ref(cid, f"{where}.row"), _int(k, f"{where}.row")) for cid, k in s["row"])
            profile = []
            for j, p in enumerate(s["profile"]):
                _expect(p, {"components", "chi_local"}, {"components", "chi_local"}, f"{where}.profile[{j}]")
                profile.append((tuple(ref(c, f"{where}.profile") for c in p["components"]),
                                _int(p["chi_local"], f"{where}.profile[{j}].chi_local")))
            sections.append(Section(ref(s["host"], f"{where}.host"), row, tuple(profile)))
        sections = tuple(sections)

    return ResolutionData(
        ambient_dim=_int(doc["ambient_dim"], "ambient_dim"),
        components=tuple(comps),
        strata=tuple(strata),
        curvette_matrix=matrix,
        branches=branches,
        axes=axes,
        sections=sections,
    )


def parse(text: str) -> ResolutionData:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ResolutionFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_doc(doc)


def form_to_doc(w: FormSpec) -> dict[str, Any]:
    return {"terms": [{"host": t.host, "m": t.m, "copies": t.copies} for t in w.terms]}


def form_from_doc(doc: Mapping) -> FormSpec:
    _expect(doc, {"terms"}, {"terms"}, "form")
    terms = []
    for i, t in enumerate(doc["terms"]):
        where = f"terms[{i}]"
        _expect(t, {"host", "m", "copies"}, {"host", "m"}, where)
        copies = _int(t.get("copies", 1), f"{where}.copies")
        m = _int(t["m"], f"{where}.m")
        if copies < 1 or m < 0:
            raise ResolutionFormatError(f"{where}: need m >= 0 and copies >= 1")
        terms.append(FormTerm(_str(t["host"], f"{where}.host"), m, copies))
    return FormSpec(tuple(terms))


def parse_form(text: str) -> FormSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ResolutionFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return form_from_doc(doc)

