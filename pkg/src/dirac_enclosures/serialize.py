"""JSON and CSV emission with a fixed number format."""
import json
import math

import numpy as np


def format_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        # JSON has no literal for these
        return "null"
    return format(x, ".17g")


def dumps(obj, indent=None, _level=0):
    """Serialize to JSON writing every float with 17 significant digits."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return {None: "null", True: "true", False: "false"}[None if obj is None else bool(obj)]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + dumps(str(k)) + ": " + dumps(v, indent, _level + 1) for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def curveset_to_dict(curves, m, Q, bound):
    comps = []
    for i, line in enumerate(curves.polylines):
        if curves.flags is None:
            pts = [[z.real, z.imag] for z in line]
        else:
            pts = [[z.real, z.imag, bool(f)] for z, f in zip(line, curves.flags[i])]
        comps.append({"closed": bool(curves.closed_flags[i]), "points": pts})
    return {"m": m, "Q": Q, "bound": bound, "component_count": curves.component_count,
            "components": comps}


def curveset_to_csv(curves):
    header = "component_id,x,y" + (",flag" if curves.flags is not None else "")
    lines = [header]
    for i, line in enumerate(curves.polylines):
        for n, z in enumerate(line):
            row = f"{i},{format_float(z.real)},{format_float(z.imag)}"
            if curves.flags is not None:
                row += "," + ("1" if curves.flags[i][n] else "0")
            lines.append(row)
    return "\n".join(lines) + "\n"
