"""CSV emission with a fixed, byte-reproducible layout."""

import numbers

__all__ = ["SCHEMAS", "format_value", "write_csv", "read_csv"]

SCHEMAS = {
    "simulate": ("run_id", "t", "mass", "energy", "momentum", "hs_norm", "fl_norm"),
    "converge": ("n", "err_hs", "err_fl"),
    "tail": ("n", "sup_tail_hs", "data_tail_hs"),
}


def format_value(v):
    """Integers verbatim, floats as the shortest round-trip decimal."""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, numbers.Integral):
        return str(int(v))
    if isinstance(v, numbers.Real):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        if isinstance(row, dict):
            row = [row[h] for h in header]
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path):
    """Return ``(header, rows)`` with every cell as a string."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = tuple(lines[0].split(","))
    return header, [tuple(line.split(",")) for line in lines[1:]]
