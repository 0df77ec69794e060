"""Chart documents: JSON in the published schema and deterministic SVG."""
from __future__ import annotations

import json
from xml.sax.saxutils import escape

from .engine import SseqClass, SseqError, SseqPage, order_exponent

__all__ = ["UNIT_PX", "export_chart", "import_chart", "chart_json", "chart_svg"]

UNIT_PX = 20
FORMATS = ("json", "svg")


def chart_json(page: SseqPage) -> dict:
    classes = sorted(page.classes.values(), key=lambda c: (c.stem, c.filt, c.id))
    return {
        "page": page.r,
        "classes": [c.as_dict() for c in classes],
        "structlines": [{"op": op, "from": a, "to": b} for op, a, b in sorted(page.structlines)],
        "differentials": [{"page": r, "from": a, "to": b} for r, a, b in sorted(page.differentials)],
        "annotations": [dict(a) for a in sorted(page.annotations, key=lambda a: (a["from"], a["to"], a.get("op", "")))],
    }


def import_chart(doc: dict | str) -> SseqPage:
    if isinstance(doc, str):
        doc = json.loads(doc)
    classes = {}
    for c in doc.get("classes", []):
        cls = SseqClass(c["id"], int(c["stem"]), int(c["filt"]), c.get("order", "F2"), c.get("label", ""))
        if cls.id in classes:
            raise SseqError(f"duplicate class id {cls.id}")
        classes[cls.id] = cls
    structlines = [(s["op"], s["from"], s["to"]) for s in doc.get("structlines", [])]
    diffs = [(int(d["page"]), d["from"], d["to"]) for d in doc.get("differentials", [])]
    return SseqPage(int(doc.get("page", 2)), classes, structlines, diffs, [dict(a) for a in doc.get("annotations", [])])


def _positions(classes: list[SseqClass]) -> dict[str, tuple[float, float]]:
    """Classes sharing a bidegree are spread horizontally inside the unit cell."""
    groups: dict[tuple[int, int], list[SseqClass]] = {}
    for c in classes:
        groups.setdefault((c.stem, c.filt), []).append(c)
    pos = {}
    for (x, y), cs in groups.items():
        cs.sort(key=lambda c: c.id)
        n = len(cs)
        for i, c in enumerate(cs):
            off = 0.0 if n == 1 else (i - (n - 1) / 2) * (0.6 / (n - 1))
            pos[c.id] = (x + off, y)
    return pos


def chart_svg(page: SseqPage, margin: int = 2) -> str:
    classes = sorted(page.classes.values(), key=lambda c: (c.stem, c.filt, c.id))
    if classes:
        xmin = min(c.stem for c in classes) - margin
        xmax = max(c.stem for c in classes) + margin
        ymax = max(c.filt for c in classes) + margin
    else:
        xmin, xmax, ymax = 0, 2 * margin, 2 * margin
    ymin = 0 - margin
    width = (xmax - xmin) * UNIT_PX
    height = (ymax - ymin) * UNIT_PX
    pos = _positions(classes)

    def px(x: float, y: float) -> tuple[str, str]:
        return f"{(x - xmin) * UNIT_PX:.1f}", f"{(ymax - y) * UNIT_PX:.1f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        '<g stroke="#dddddd" stroke-width="0.5">',
    ]
    for x in range(xmin, xmax + 1):
        x1, y1 = px(x, ymin)
        x2, y2 = px(x, ymax)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    for y in range(ymin, ymax + 1):
        x1, y1 = px(xmin, y)
        x2, y2 = px(xmax, y)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    out.append('<g stroke="black" stroke-width="1">')
    for op, a, b in sorted(page.structlines):
        if a in pos and b in pos:
            x1, y1 = px(*pos[a])
            x2, y2 = px(*pos[b])
            out.append(f'<line class="{op}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    for ann in sorted(page.annotations, key=lambda a: (a["from"], a["to"])):
        if ann["from"] in pos and ann["to"] in pos:
            x1, y1 = px(*pos[ann["from"]])
            x2, y2 = px(*pos[ann["to"]])
            out.append(f'<line class="{escape(ann["kind"])}" stroke-dasharray="3,2" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    out.append('<g stroke="blue" stroke-width="1">')
    for r, a, b in sorted(page.differentials):
        if a in pos and b in pos:
            x1, y1 = px(*pos[a])
            x2, y2 = px(*pos[b])
            out.append(f'<line class="d{r}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    out.append("<g>")
    for c in classes:
        cx, cy = px(*pos[c.id])
        title = f"<title>{escape(c.label or c.id)}</title>"
        k = order_exponent(c.order)
        if k is None:
            out.append(f'<rect x="{float(cx) - 3:.1f}" y="{float(cy) - 3:.1f}" width="6" height="6" fill="black">{title}</rect>')
        else:
            out.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" fill="black">{title}</circle>')
            for ring in range(1, k):
                out.append(f'<circle cx="{cx}" cy="{cy}" r="{2.5 + 2 * ring:.1f}" fill="none" stroke="black"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_chart(page: SseqPage, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(chart_json(page), indent=1, sort_keys=True) + "\n"
    if fmt == "svg":
        return chart_svg(page)
    raise SseqError(f"unknown chart format {fmt!r} (expected one of {', '.join(FORMATS)})")
