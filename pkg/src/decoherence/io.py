"""CSV/JSON output conventions: header row, 17 significant digits, complex as re,im pairs."""
import csv
import json
import os

import numpy as np


def format_float(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def _is_complex(v):
    return isinstance(v, (complex, np.complexfloating))


def expand_complex(header, row):
    """Split complex entries into <name>_re, <name>_im columns."""
    out_h, out_r = [], []
    for h, v in zip(header, row):
        if _is_complex(v):
            out_h += [f"{h}_re", f"{h}_im"]
            out_r += [v.real, v.imag]
        else:
            out_h.append(h)
            out_r.append(v)
    return out_h, out_r


def write_csv(path, header, rows):
    rows = list(rows)
    header = list(header)
    if rows:
        header = expand_complex(header, rows[0])[0]
        rows = [expand_complex(range(len(r)), r)[1] for r in rows]
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([format_float(x) for x in r])
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_json(path, data):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(_jsonable(data), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def dumps(data):
    return json.dumps(_jsonable(data), sort_keys=True)
