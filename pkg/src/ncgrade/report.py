"""Report assembly and serialization.

JSON output is canonical: sorted keys, compact separators, no floats
(rational scalars are rendered as exact "p/q" strings before they reach the
serializer), one trailing newline.  Re-running a command with the same
manifest and options must reproduce the bytes.
"""

import json

from . import __version__

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class Report:
    def __init__(self, command, manifest, bounds, field):
        self.payload = {
            "tool": {"name": "ncgrade", "version": __version__},
            "command": command,
            "manifest": {"name": manifest.name, "sha256": manifest.digest},
            "field": field.name,
            "bounds": bounds,
            "results": {},
            "status": "computed",
        }

    def set(self, key, value):
        self.payload["results"][key] = value
        return self

    def status(self, status):
        self.payload["status"] = status
        return self

    def exit_code(self):
        return {
            "pass": EXIT_PASS,
            "computed": EXIT_PASS,
            "fail": EXIT_FAIL,
            "inconclusive": EXIT_INCONCLUSIVE,
        }[self.payload["status"]]

    def to_json(self):
        return json.dumps(self.payload, sort_keys=True, separators=(",", ":")) + "\n"

    def to_table(self):
        lines = []
        p = self.payload
        lines.append(
            "%s %s | %s on %s [%s]"
            % (p["tool"]["name"], p["tool"]["version"], p["command"],
               p["manifest"]["name"], p["field"])
        )
        lines.append("status: %s" % p["status"])
        if p["bounds"]:
            lines.append("bounds: " + ", ".join("%s=%s" % kv for kv in sorted(p["bounds"].items())))
        lines.append("")
        _render(p["results"], lines, 0)
        return "\n".join(lines) + "\n"


def _render(value, lines, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        for k in sorted(value, key=str):
            v = value[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append("%s%s:" % (pad, k))
                _render(v, lines, depth + 1)
            else:
                lines.append("%s%s: %s" % (pad, k, _flat(v)))
    elif isinstance(value, list):
        for v in value:
            lines.append("%s- %s" % (pad, _flat(v)))
    else:
        lines.append("%s%s" % (pad, _flat(value)))


def _is_flat(v):
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _flat(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


def table_payload(table):
    """HomTable -> JSON-ready dict with certification flags."""
    values = {str(d): v for d, v in table.values.items()}
    uncert = sorted(d for d, ok in table.certified.items() if not ok)
    return {
        "table": values,
        "uncertified_degrees": [str(d) for d in uncert],
    }
