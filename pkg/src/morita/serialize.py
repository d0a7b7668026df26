"""JSON instance documents: ``{"kind": ..., "name": ..., "payload": {...}}``.

All numbers are plain integers.  Groupoid-flavoured payloads refer to objects,
arrows and carrier points by name; list order fixes the internal indexing.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import Bimodule, FiniteDimAlgebra
from .errors import ParseError
from .groupoid import (UNDEF, Bibundle, FiniteGroupoid, GroupoidAction, GroupoidFunctor,
                       make_bibundle)
from .multimatrix import MultimatrixAlgebra, MultiplicityBimodule
from .report import dumps

KINDS = ("algebra", "bimodule", "multimatrix", "correspondence", "groupoid", "action",
         "bibundle", "functor")


@dataclass
class InstanceDocument:
    kind: str
    name: str
    payload: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, "name": self.name, "payload": self.payload}

    def dumps(self) -> str:
        return dumps(self.to_dict())

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()


def parse_document(text: str) -> InstanceDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise ParseError("instance document must be a JSON object")
    for key in ("kind", "name", "payload"):
        if key not in raw:
            raise ParseError(f"missing top-level field {key!r}")
    if raw["kind"] not in KINDS:
        raise ParseError(f"unknown kind {raw['kind']!r}; expected one of {', '.join(KINDS)}")
    if not isinstance(raw["payload"], dict):
        raise ParseError("payload must be a JSON object")
    return InstanceDocument(raw["kind"], str(raw["name"]), raw["payload"])


def load_document(path) -> InstanceDocument:
    return parse_document(Path(path).read_text(encoding="utf-8"))


def save_document(doc: InstanceDocument, path) -> None:
    Path(path).write_text(doc.dumps(), encoding="utf-8")


def load_workspace(paths) -> list[InstanceDocument]:
    """Documents from files and directories (``*.json`` in sorted order); names must be unique."""
    docs = []
    for p in paths:
        p = Path(p)
        files = sorted(p.glob("*.json")) if p.is_dir() else [p]
        docs.extend(load_document(f) for f in files)
    seen = set()
    for d in docs:
        if d.name in seen:
            raise ParseError(f"duplicate instance name {d.name!r}")
        seen.add(d.name)
    return docs


# -- payload -> objects ------------------------------------------------------------------

def _field(payload: dict, key: str, kind: str):
    if key not in payload:
        raise ParseError(f"{kind} payload is missing field {key!r}")
    return payload[key]


def _lookup(table: dict, name, what: str) -> int:
    try:
        return table[str(name)]
    except KeyError:
        raise ParseError(f"unknown {what} {name!r}") from None


def _ints(value, what: str) -> np.ndarray:
    arr = np.array(value, dtype=object)
    if arr.size and not all(isinstance(v, int) and not isinstance(v, bool) for v in arr.flat):
        raise ParseError(f"{what} must contain integers only")
    return np.array(value, dtype=np.int64)


def algebra_from(payload: dict, name: str = "") -> FiniteDimAlgebra:
    p = _field(payload, "p", "algebra")
    sc = _ints(_field(payload, "structure_constants", "algebra"), "structure_constants")
    unit = payload.get("unit")
    return FiniteDimAlgebra(p, sc, None if unit is None else _ints(unit, "unit"),
                            name=payload.get("name", name))


def algebra_payload(a: FiniteDimAlgebra) -> dict:
    out = a.to_payload()
    if a.name:
        out["name"] = a.name
    return out


def bimodule_from(payload: dict, name: str = "") -> Bimodule:
    left = algebra_from(_field(payload, "left", "bimodule"))
    right = algebra_from(_field(payload, "right", "bimodule"))
    return Bimodule(left, right, _field(payload, "dim", "bimodule"),
                    _ints(_field(payload, "left_action", "bimodule"), "left_action"),
                    _ints(_field(payload, "right_action", "bimodule"), "right_action"),
                    name=name)


def bimodule_payload(m: Bimodule) -> dict:
    return {"left": algebra_payload(m.left_algebra), "right": algebra_payload(m.right_algebra),
            "dim": m.dim, "left_action": m.L.tolist(), "right_action": m.R.tolist()}


def multimatrix_from(payload: dict) -> MultimatrixAlgebra:
    return MultimatrixAlgebra(tuple(_field(payload, "blocks", "multimatrix")))


def correspondence_from(payload: dict, name: str = "") -> MultiplicityBimodule:
    left = multimatrix_from(_field(payload, "left", "correspondence"))
    right = multimatrix_from(_field(payload, "right", "correspondence"))
    return MultiplicityBimodule(left, right, _ints(_field(payload, "mult", "correspondence"),
                                                   "mult"), name=name)


def groupoid_from(payload: dict, name: str = "") -> FiniteGroupoid:
    objects = [str(o) for o in _field(payload, "objects", "groupoid")]
    arrows = [str(a) for a in _field(payload, "arrows", "groupoid")]
    oi = {o: i for i, o in enumerate(objects)}
    ai = {a: i for i, a in enumerate(arrows)}
    src = _field(payload, "source", "groupoid")
    tgt = _field(payload, "target", "groupoid")
    inv = _field(payload, "inverse", "groupoid")
    unit = _field(payload, "unit", "groupoid")
    for table, what in ((src, "source"), (tgt, "target"), (inv, "inverse")):
        missing = [a for a in arrows if a not in table]
        if missing:
            raise ParseError(f"groupoid {what} table lacks arrow {missing[0]!r}")
    missing = [o for o in objects if o not in unit]
    if missing:
        raise ParseError(f"groupoid unit table lacks object {missing[0]!r}")
    comp = np.full((len(arrows), len(arrows)), UNDEF, dtype=np.int64)
    for entry in _field(payload, "compose", "groupoid"):
        if len(entry) != 3:
            raise ParseError("compose entries must be [x, y, xy]")
        x, y, z = (_lookup(ai, v, "arrow") for v in entry)
        comp[x, y] = z
    return FiniteGroupoid(objects, arrows,
                          [_lookup(oi, src[a], "object") for a in arrows],
                          [_lookup(oi, tgt[a], "object") for a in arrows],
                          comp, [_lookup(ai, inv[a], "arrow") for a in arrows],
                          [_lookup(ai, unit[o], "arrow") for o in objects],
                          name=payload.get("name", name))


def groupoid_payload(g: FiniteGroupoid) -> dict:
    out = g.to_payload()
    if g.name:
        out["name"] = g.name
    return out


def _action_table(g: FiniteGroupoid, points: dict, entries, side: str) -> np.ndarray:
    T = np.full((g.n_arrows, len(points)), UNDEF, dtype=np.int64)
    for entry in entries:
        if len(entry) != 3:
            raise ParseError("action entries must be triples")
        if side == "left":
            x, m, v = entry
        else:
            m, x, v = entry
        T[_lookup(g.arrow_index, x, "arrow"), _lookup(points, m, "carrier point")] = \
            _lookup(points, v, "carrier point")
    return T


def action_from(payload: dict, name: str = "") -> GroupoidAction:
    g = groupoid_from(_field(payload, "groupoid", "action"))
    side = payload.get("side", "left")
    carrier = [str(c) for c in _field(payload, "carrier", "action")]
    points = {c: i for i, c in enumerate(carrier)}
    base = _field(payload, "base", "action")
    anchors = [_lookup(g.obj_index, base.get(c), "object") for c in carrier]
    table = _action_table(g, points, _field(payload, "act", "action"), side)
    return GroupoidAction(g, carrier, anchors, table, side)


def bibundle_from(payload: dict, name: str = "") -> Bibundle:
    g = groupoid_from(_field(payload, "left_groupoid", "bibundle"))
    h = groupoid_from(_field(payload, "right_groupoid", "bibundle"))
    carrier = [str(c) for c in _field(payload, "carrier", "bibundle")]
    points = {c: i for i, c in enumerate(carrier)}
    tau = _field(payload, "tau", "bibundle")
    sigma = _field(payload, "sigma", "bibundle")
    return make_bibundle(g, h, carrier,
                         [_lookup(g.obj_index, tau.get(c), "object") for c in carrier],
                         [_lookup(h.obj_index, sigma.get(c), "object") for c in carrier],
                         _action_table(g, points, _field(payload, "left_act", "bibundle"), "left"),
                         _action_table(h, points, _field(payload, "right_act", "bibundle"),
                                       "right"), name=name)


def bibundle_payload(b: Bibundle) -> dict:
    out = b.to_payload()
    out["left_groupoid"] = groupoid_payload(b.G)
    out["right_groupoid"] = groupoid_payload(b.H)
    return out


def functor_from(payload: dict, name: str = "") -> GroupoidFunctor:
    g = groupoid_from(_field(payload, "source", "functor"))
    h = groupoid_from(_field(payload, "target", "functor"))
    objs = _field(payload, "objects", "functor")
    arrows = _field(payload, "arrows", "functor")
    return GroupoidFunctor(g, h,
                           [_lookup(h.obj_index, objs.get(o), "object") for o in g.objects],
                           [_lookup(h.arrow_index, arrows.get(a), "arrow") for a in g.arrows])


_BUILDERS = {
    "algebra": algebra_from,
    "bimodule": bimodule_from,
    "multimatrix": lambda payload, name="": multimatrix_from(payload),
    "correspondence": correspondence_from,
    "groupoid": groupoid_from,
    "action": action_from,
    "bibundle": bibundle_from,
    "functor": functor_from,
}


def build(doc: InstanceDocument):
    """Decode and validate; axiom failures propagate as AxiomViolation subclasses."""
    return _BUILDERS[doc.kind](doc.payload, doc.name)


def document_for(obj, name: str) -> InstanceDocument:
    if isinstance(obj, FiniteDimAlgebra):
        return InstanceDocument("algebra", name, algebra_payload(obj))
    if isinstance(obj, Bimodule):
        return InstanceDocument("bimodule", name, bimodule_payload(obj))
    if isinstance(obj, MultimatrixAlgebra):
        return InstanceDocument("multimatrix", name, obj.to_payload())
    if isinstance(obj, MultiplicityBimodule):
        return InstanceDocument("correspondence", name, obj.to_payload())
    if isinstance(obj, FiniteGroupoid):
        return InstanceDocument("groupoid", name, groupoid_payload(obj))
    if isinstance(obj, GroupoidAction):
        payload = obj.to_payload()
        payload["groupoid"] = groupoid_payload(obj.groupoid)
        return InstanceDocument("action", name, payload)
    if isinstance(obj, Bibundle):
        return InstanceDocument("bibundle", name, bibundle_payload(obj))
    if isinstance(obj, GroupoidFunctor):
        payload = obj.to_payload()
        payload["source"] = groupoid_payload(obj.source)
        payload["target"] = groupoid_payload(obj.target)
        return InstanceDocument("functor", name, payload)
    raise TypeError(f"no document kind for {type(obj).__name__}")
