"""Report sections and deterministic rendering."""
from __future__ import annotations

import json
from importlib import resources

SCHEMA_ID = "krc-report/1"


def load_schema():
    return json.loads(resources.files("krc").joinpath("report_schema.json").read_text())


def one_based(xs):
    return [x + 1 for x in sorted(xs)]


def input_section(source, S, ts=None):
    out = {"source": source, "size": S.n}
    if ts is not None:
        out["states"] = ts.q
    return out


def classification_section(S):
    from krc.core import classify

    return classify(S).as_dict()


def green_section(S):
    g = S.green
    classes = []
    for J in range(g.n_j):
        members = g.j_members[J]
        h = g.h_members[g.h_class[members[0]]]
        classes.append({
            "elements": one_based(members),
            "r_classes": len({g.r_class[x] for x in members}),
            "l_classes": len({g.l_class[x] for x in members}),
            "h_size": len(h),
            "regular": g.regular_j[J],
            "height": g.j_height[J],
            "below": sorted(g.j_below[J]),
        })
    order = sorted(range(g.n_j), key=lambda J: (g.j_height[J], min(g.j_members[J])))
    rank = {J: i for i, J in enumerate(order)}
    ordered = []
    for J in order:
        c = classes[J]
        c["below"] = sorted(rank[K] + 1 for K in c["below"])
        ordered.append(c)
    return {"j_classes": ordered, "counts": {"J": g.n_j, "R": g.n_r, "L": g.n_l, "H": g.n_h},
            "idempotents": one_based(S.idempotents)}


def render(report, fmt="json"):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    lines = []
    _flatten(report, "", lines)
    return "\n".join(lines) + "\n"


def _flatten(value, prefix, lines):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(value[k], f"{prefix}.{k}" if prefix else str(k), lines)
    elif isinstance(value, list) and value and all(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            _flatten(v, f"{prefix}[{i}]", lines)
    else:
        text = json.dumps(value, ensure_ascii=False) if not isinstance(value, str) else value
        lines.append(f"{prefix}: {text}")
