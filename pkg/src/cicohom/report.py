"""Deterministic reports: an aligned text table form and a ``key<TAB>value`` record form."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__
from .exactlin import PIVOT_RULE


@dataclass
class Table:
    name: str
    header: tuple
    rows: list


@dataclass
class Report:
    job_name: str
    command: str
    echo: str
    items: list = field(default_factory=list)       # (key, value) or Table, in order
    warnings: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def add(self, key: str, value) -> None:
        self.items.append((key, _text(value)))

    def table(self, name: str, header, rows) -> None:
        self.items.append(Table(name, tuple(header), [tuple(_text(x) for x in r) for r in rows]))

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    # -- rendering -------------------------------------------------------------
    def render(self, fmt: str = "table") -> str:
        if fmt == "records":
            return self.render_records()
        return self.render_table()

    def render_table(self) -> str:
        out = [f"# job: {self.job_name}", f"# command: {self.command}", "", "## job"]
        out.extend(self.echo.rstrip("\n").splitlines())
        out += ["", "## result"]
        width = max([len(k) for k, _ in self._scalars()] + [0])
        for item in self.items:
            if isinstance(item, Table):
                out.append("")
                out.append(f"{item.name}:")
                cols = [item.header] + item.rows
                widths = [max(len(str(r[i])) for r in cols) for i in range(len(item.header))]
                for r in cols:
                    out.append("  " + "  ".join(str(x).rjust(w) for x, w in zip(r, widths)).rstrip())
            else:
                k, v = item
                out.append(f"{k.ljust(width)}  {v}")
        if self.warnings:
            out += ["", "## warnings"]
            out.extend(f"warning: {w}" for w in self.warnings)
        out += ["", "## provenance"]
        pw = max(len(k) for k in self.provenance) if self.provenance else 0
        for k, v in self.provenance.items():
            out.append(f"{k.ljust(pw)}  {v}")
        return "\n".join(out) + "\n"

    def render_records(self) -> str:
        out = [f"job\t{self.job_name}", f"command\t{self.command}"]
        section = None
        for line in self.echo.splitlines():
            s = line.strip()
            if not s:
                continue
            if s.startswith("["):
                section = s[1:-1]
                continue
            k, _, v = s.partition(" = ")
            out.append(f"job.{section}.{k}\t{v}")
        for item in self.items:
            if isinstance(item, Table):
                out.append(f"table.{item.name}.columns\t{' '.join(item.header)}")
                for i, r in enumerate(item.rows):
                    out.append(f"table.{item.name}.{i}\t{' '.join(str(x) for x in r)}")
            else:
                k, v = item
                out.append(f"result.{k}\t{v}")
        for w in self.warnings:
            out.append(f"warning\t{w}")
        for k, v in self.provenance.items():
            out.append(f"provenance.{k}\t{v}")
        return "\n".join(out) + "\n"

    def _scalars(self):
        return [i for i in self.items if not isinstance(i, Table)]


def provenance(field_spec, cutoff, window, budget) -> dict:
    return {
        "tool": f"cicohom {__version__}",
        "field": str(field_spec),
        "cutoff": str(cutoff),
        "window": str(window),
        "budget": str(budget),
        "pivot_rule": PIVOT_RULE,
        "degrees": "Ext^n and BGG rows use cohomological n = -(homological degree)",
    }


def _text(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (list, tuple)):
        return ",".join(_text(y) for y in x)
    if x is None:
        return "unknown"
    return str(x)
