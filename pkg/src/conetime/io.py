"""Versioned document formats.

All formats are line-oriented UTF-8 text with a magic first line.
Numbers are written with ``repr`` (shortest round-trip form) and parsed
with ``float``, so serialisation is bit-exact and locale-independent;
rational literals like ``3/2`` are accepted on input and converted to
floating point.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from .errors import FormatError, ResidueSumNonzero, UnknownVertex
from .one_form import EdgeCochain, canonical_slot
from .surface import ConeSurface
from .tracing import DirectionState, TracedGeodesic
from .geodesics import trace

SURFACE_MAGIC = "CONETIME-SURFACE v1"
OMEGA_MAGIC = "CONETIME-OMEGA v1"
SIGNAL_MAGIC = "CONETIME-SIGNAL v1"
TRACE_MAGIC = "CONETIME-TRACE v1"
RECORDS_MAGIC = "CONETIME-RECORDS v1"


def _num(token, line_no):
    """Parse a float or exact rational literal."""
    try:
        if "/" in token:
            f = Fraction(token)
            return f.numerator / f.denominator
        return float(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad number {token!r}", line_no) from None


def _lines(text, magic):
    raw = text.splitlines()
    if not raw or raw[0].strip() != magic:
        raise FormatError(f"missing magic header {magic!r}", 1)
    out = []
    for i, line in enumerate(raw[1:], start=2):
        body = line.split("#", 1)[0].strip()
        if body:
            out.append((i, body.split()))
    return out


# -- surface ------------------------------------------------------------------


def parse_surface(text: str) -> ConeSurface:
    """Parse a CONETIME-SURFACE v1 document."""
    tris = {}
    gluings = {}
    labels = {}
    for line_no, tok in _lines(text, SURFACE_MAGIC):
        kind = tok[0]
        if kind == "triangle":
            if len(tok) != 8:
                raise FormatError("triangle needs: id x0 y0 x1 y1 x2 y2", line_no)
            tid = int(tok[1])
            if tid in tris:
                raise FormatError(f"duplicate triangle id {tid}", line_no)
            vals = [_num(t, line_no) for t in tok[2:]]
            tris[tid] = ((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5]))
        elif kind == "glue":
            if len(tok) != 5:
                raise FormatError("glue needs: tri edge tri edge", line_no)
            a = (int(tok[1]), int(tok[2]))
            b = (int(tok[3]), int(tok[4]))
            if a in gluings and gluings[a] != b:
                raise FormatError(f"edge {a} glued twice", line_no)
            gluings[a] = b
            gluings[b] = a
        elif kind == "label":
            if len(tok) != 4:
                raise FormatError("label needs: name tri slot", line_no)
            labels[tok[1]] = (int(tok[2]), int(tok[3]))
        else:
            raise FormatError(f"unknown directive {kind!r}", line_no)
    if not tris:
        raise FormatError("no triangles", 1)
    order = sorted(tris)
    index = {tid: i for i, tid in enumerate(order)}
    for (t, e) in gluings:
        if t not in index or not 0 <= e <= 2:
            raise FormatError(f"gluing references unknown edge ({t}, {e})")
    remapped = {
        (index[t], e): (index[t2], e2) for (t, e), (t2, e2) in gluings.items()
    }
    relabeled = {}
    for name, (t, s) in labels.items():
        if t not in index or not 0 <= s <= 2:
            raise FormatError(f"label {name!r} references unknown corner")
        relabeled[name] = (index[t], s)
    return ConeSurface([tris[t] for t in order], remapped, relabeled)


def write_surface(surface: ConeSurface) -> str:
    out = [SURFACE_MAGIC]
    for i, tri in enumerate(surface.triangles):
        coords = " ".join(repr(c) for p in tri.points for c in p)
        out.append(f"triangle {i} {coords}")
    for slot in sorted(surface.gluings):
        partner = surface.gluings[slot]
        if slot < partner:
            out.append(f"glue {slot[0]} {slot[1]} {partner[0]} {partner[1]}")
    for vc in surface.vertex_classes:
        t, s = vc.corners[0]
        out.append(f"label {vc.label} {t} {s}")
    return "\n".join(out) + "\n"


def _slurp(source, magic):
    """Document text from either literal text or a file path."""
    source = os.fspath(source)
    if "\n" not in source and not source.strip().startswith(magic):
        with open(source, "r", encoding="utf-8") as fh:
            return fh.read()
    return source


def build_surface(source) -> ConeSurface:
    """Build and validate a surface from document text or a file path."""
    return parse_surface(_slurp(source, SURFACE_MAGIC))


# -- omega ---------------------------------------------------------------------


def parse_omega(text: str, surface: ConeSurface) -> EdgeCochain:
    """Parse a CONETIME-OMEGA v1 document against its surface."""
    residues = {}
    values = {}
    for line_no, tok in _lines(text, OMEGA_MAGIC):
        kind = tok[0]
        if kind == "residue":
            if len(tok) != 3:
                raise FormatError("residue needs: vertex value", line_no)
            try:
                vc = surface.vertex(tok[1])
            except UnknownVertex:
                raise FormatError(f"unknown vertex {tok[1]!r}", line_no) from None
            residues[vc.index] = _num(tok[2], line_no)
        elif kind == "edge":
            if len(tok) != 4:
                raise FormatError("edge needs: tri slot value", line_no)
            slot = (int(tok[1]), int(tok[2]))
            if slot not in surface.gluings:
                raise FormatError(f"unknown edge {slot}", line_no)
            val = _num(tok[3], line_no)
            canon = canonical_slot(surface, slot)
            if slot != canon:
                slot, val = canon, -val
            if slot in values:
                raise FormatError(f"edge {slot} assigned twice", line_no)
            values[slot] = val
        else:
            raise FormatError(f"unknown directive {kind!r}", line_no)
    omega = EdgeCochain(surface, values, residues)
    total = math.fsum(omega.residues.values())
    if abs(total) > 1e-9:
        raise ResidueSumNonzero(
            f"declared residues sum to {total!r}; no closed 1-form realises them"
        )
    for vc in surface.vertex_classes:
        want = omega.residues.get(vc.index, 0.0)
        if abs(omega.vertex_sum(vc.index) - want) > 1e-9:
            raise FormatError(
                f"edge jumps around {vc.label} sum to "
                f"{omega.vertex_sum(vc.index)!r}, declared residue {want!r}"
            )
    return omega


def write_omega(omega: EdgeCochain) -> str:
    out = [OMEGA_MAGIC]
    surface = omega.surface
    for vc in surface.vertex_classes:
        if vc.index in omega.residues and (vc.is_cone or omega.residues[vc.index]):
            out.append(f"residue {vc.label} {repr(omega.residues[vc.index])}")
    for slot in sorted(omega.values):
        if omega.values[slot] != 0.0:
            out.append(f"edge {slot[0]} {slot[1]} {repr(omega.values[slot])}")
    return "\n".join(out) + "\n"


def load_omega(source, surface: ConeSurface) -> EdgeCochain:
    return parse_omega(_slurp(source, OMEGA_MAGIC), surface)


# -- signals ----------------------------------------------------------------------


def parse_signal(text: str, surface: ConeSurface):
    """Parse a CONETIME-SIGNAL v1 document: waypoints plus traced legs.

    Each ``leg dx dy length`` line traces a geodesic from the preceding
    waypoint; the trace must terminate by length budget.
    """
    waypoints = []
    legs = []
    for line_no, tok in _lines(text, SIGNAL_MAGIC):
        kind = tok[0]
        if kind == "waypoint":
            if len(tok) != 4:
                raise FormatError("waypoint needs: tri x y", line_no)
            waypoints.append(
                (int(tok[1]), (_num(tok[2], line_no), _num(tok[3], line_no)))
            )
        elif kind == "leg":
            if len(tok) != 4:
                raise FormatError("leg needs: dx dy length", line_no)
            if len(waypoints) != len(legs) + 1:
                raise FormatError("leg must follow its start waypoint", line_no)
            tri, p = waypoints[-1]
            d = (_num(tok[1], line_no), _num(tok[2], line_no))
            length = _num(tok[3], line_no)
            legs.append(
                trace(surface, DirectionState(tri, p, d), length, detect_closure=False)
            )
        else:
            raise FormatError(f"unknown directive {kind!r}", line_no)
    return waypoints, legs


def write_signal(waypoints, legs) -> str:
    out = [SIGNAL_MAGIC]
    for i, (tri, p) in enumerate(waypoints):
        out.append(f"waypoint {tri} {repr(p[0])} {repr(p[1])}")
        if i < len(legs):
            leg = legs[i]
            d = leg.start.direction
            out.append(f"leg {repr(d[0])} {repr(d[1])} {repr(leg.length)}")
    return "\n".join(out) + "\n"


def load_signal(source, surface: ConeSurface):
    return parse_signal(_slurp(source, SIGNAL_MAGIC), surface)


# -- traced geodesics ---------------------------------------------------------------


def write_trace(g: TracedGeodesic) -> str:
    """Line-oriented record stream: one chart segment per line."""
    out = [TRACE_MAGIC]
    out.append(
        f"meta length={repr(g.length)} termination={g.termination} "
        f"segments={len(g.segments)}"
    )
    for i, seg in enumerate(g.segments):
        out.append(
            f"seg {i} {seg.tri} {repr(seg.entry[0])} {repr(seg.entry[1])} "
            f"{repr(seg.exit[0])} {repr(seg.exit[1])}"
        )
    return "\n".join(out) + "\n"


# -- structured records ----------------------------------------------------------------


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def emit_records(records) -> str:
    """Records: list of (type, [(key, value), ...]) -> document text."""
    out = [RECORDS_MAGIC]
    for rtype, fields in records:
        parts = [rtype]
        for k, v in fields:
            s = format_value(v)
            if " " in s or "=" in s:
                raise FormatError(f"record value {s!r} not serialisable")
            parts.append(f"{k}={s}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def parse_records(text: str):
    """Inverse of :func:`emit_records`, keeping values as strings."""
    out = []
    for _, tok in _lines(text, RECORDS_MAGIC):
        rtype = tok[0]
        fields = []
        for part in tok[1:]:
            if "=" not in part:
                raise FormatError(f"bad record field {part!r}")
            k, v = part.split("=", 1)
            fields.append((k, v))
        out.append((rtype, fields))
    return out


def reemit_records(parsed) -> str:
    """Serialise parsed (string-valued) records; byte-inverse of parsing."""
    out = [RECORDS_MAGIC]
    for rtype, fields in parsed:
        out.append(" ".join([rtype] + [f"{k}={v}" for k, v in fields]))
    return "\n".join(out) + "\n"
