"""Job files: flat ``[section]`` headers with ``key = value`` lines.

Values are JSON literals (numbers, strings, lists, booleans); a bare word
is read as a string.  ``#`` starts a comment line.  Example::

    [field]
    kind = prime
    p = 101

    [algebra]
    kind = exterior
    degrees = [1, 1, 1]

    [module]
    kind = residue-field

    [command]
    name = betti
    cutoff = 20
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .algebra import ExteriorAlgebra, InfiniteQuotientError, QuotientRing, RelationError
from .dgmodules import (ModuleValidationError, algebra_module, cokernel_module, explicit_module,
                        quotient_by_generators, residue_field)
from .exactlin import FieldSpec
from .polynomials import PolynomialSyntaxError

SECTIONS = ("field", "algebra", "module", "command")

KEYS = {
    "field": {"kind", "p"},
    "algebra": {"kind", "degrees", "variables", "relations"},
    "module": {"kind", "degree", "kill", "degrees", "actions", "differential", "labels",
               "gen_degrees", "columns"},
    "command": {"name", "cutoff", "window", "report", "budget", "source", "target", "exponents",
                "degrees", "poly", "dump", "method"},
}

COMMANDS = ("betti", "ext", "complexity", "loewy", "level-bounds", "bgg", "ci-check", "poincare",
            "yoneda", "normal-form", "homology")
MODULE_KINDS = ("residue-field", "algebra", "quotient-by-generators", "explicit", "cokernel")
CHOICES = {"module", "residue-field", "algebra"}

# diagnostic codes
E_SYNTAX = "E100"
E_SECTION = "E101"
E_KEY = "E102"
E_VALUE = "E103"
E_MISSING = "E104"
E_POLY = "E110"
E_EVEN = "E111"
E_RELATION = "E112"
E_MODULE = "E113"
E_OPTION = "E120"


class JobError(ValueError):
    """Diagnostic with a code and a 1-based line/column."""

    def __init__(self, code: str, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{code} {where}{message}")
        self.code = code
        self.message = message
        self.line = line
        self.column = column


@dataclass
class JobSpec:
    sections: dict = field(default_factory=dict)
    # (section, key) -> (line, value column); not part of equality
    positions: dict = field(default_factory=dict, compare=False, repr=False)
    name: str = field(default="", compare=False)
    lines: list = field(default_factory=list, compare=False, repr=False)

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    @property
    def command(self) -> str:
        return self.get("command", "name")

    def where(self, section: str, key: str) -> tuple[int, int]:
        return self.positions.get((section, key), (0, 0))


_LINE = re.compile(r"^(?P<key>[A-Za-z_][A-Za-z0-9_-]*)\s*=\s*(?P<value>.*?)\s*$")
_WORD = re.compile(r"^[A-Za-z0-9_.:+-]+$")


def _parse_value(text: str, line: int, col: int):
    if text == "":
        raise JobError(E_VALUE, "missing value", line, col)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        if _WORD.match(text):
            return text
        raise JobError(E_VALUE, f"cannot read value: {e.msg}", line, col + e.colno - 1) from None


def parse_job(text: str, name: str = "") -> JobSpec:
    """Parse and validate a job file; raises :class:`JobError`."""
    spec = JobSpec(name=name, lines=text.splitlines())
    current = None
    for ln, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        if s.startswith("["):
            if not s.endswith("]"):
                raise JobError(E_SYNTAX, "expected ']' to close the section header", ln, len(raw.rstrip()) + 1)
            sec = s[1:-1].strip()
            if sec not in SECTIONS:
                raise JobError(E_SECTION, f"unknown section [{sec}]; expected one of {', '.join(SECTIONS)}",
                               ln, raw.index("[") + 2)
            if sec in spec.sections:
                raise JobError(E_SECTION, f"section [{sec}] given twice", ln, raw.index("[") + 2)
            spec.sections[sec] = {}
            current = sec
            continue
        m = _LINE.match(raw.strip())
        indent = len(raw) - len(raw.lstrip())
        if not m:
            raise JobError(E_SYNTAX, "expected 'key = value' or '[section]'", ln, indent + 1)
        if current is None:
            raise JobError(E_SYNTAX, "key outside of any section", ln, indent + 1)
        key = m.group("key")
        if key not in KEYS[current]:
            raise JobError(E_KEY, f"unknown key {key!r} in [{current}]", ln, indent + 1)
        if key in spec.sections[current]:
            raise JobError(E_KEY, f"key {key!r} given twice", ln, indent + 1)
        vcol = indent + m.start("value") + 1
        spec.sections[current][key] = _parse_value(m.group("value"), ln, vcol)
        spec.positions[(current, key)] = (ln, vcol)
    validate(spec)
    return spec


def _fail(spec: JobSpec, code: str, section: str, key: str, message: str, offset: int = 0):
    line, col = spec.where(section, key)
    raise JobError(code, message, line, col + offset if col else 0)


def _require(spec: JobSpec, section: str, key: str):
    if section not in spec.sections:
        raise JobError(E_MISSING, f"missing section [{section}]")
    if key not in spec.sections[section]:
        raise JobError(E_MISSING, f"missing key {key!r} in [{section}]")
    return spec.sections[section][key]


def _int_list(spec, section, key, value):
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        _fail(spec, E_VALUE, section, key, f"{key} must be a list of integers")
    return value


def validate(spec: JobSpec) -> None:
    """Check command options and build the algebra and module once, to surface errors early."""
    for sec in ("algebra", "module", "command"):
        if sec not in spec.sections:
            raise JobError(E_MISSING, f"missing section [{sec}]")
    name = _require(spec, "command", "name")
    if name not in COMMANDS:
        _fail(spec, E_OPTION, "command", "name", f"unknown command {name!r}; expected one of {', '.join(COMMANDS)}")
    for key in ("cutoff", "window", "budget"):
        v = spec.get("command", key)
        if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < (1 if key != "cutoff" else 0)):
            _fail(spec, E_OPTION, "command", key, f"{key} must be a {'non-negative' if key == 'cutoff' else 'positive'} integer")
    rep = spec.get("command", "report")
    if rep is not None and rep not in ("table", "records"):
        _fail(spec, E_OPTION, "command", "report", "report must be 'table' or 'records'")
    for key in ("source", "target"):
        v = spec.get("command", key)
        if v is not None and v not in CHOICES:
            _fail(spec, E_OPTION, "command", key, f"{key} must be one of {', '.join(sorted(CHOICES))}")
    if spec.get("command", "exponents") is not None:
        ex = _int_list(spec, "command", "exponents", spec.get("command", "exponents"))
        if any(e < 1 for e in ex):
            _fail(spec, E_OPTION, "command", "exponents", "exponents must be positive")
    if name == "yoneda":
        d = _require(spec, "command", "degrees")
        d = _int_list(spec, "command", "degrees", d)
        if len(d) != 2 or min(d) < 0:
            _fail(spec, E_OPTION, "command", "degrees", "yoneda needs degrees = [m, n] with m, n >= 0")
    if name == "normal-form":
        p = _require(spec, "command", "poly")
        if not isinstance(p, str):
            _fail(spec, E_OPTION, "command", "poly", "poly must be a string")
    if spec.get("command", "method") not in (None, "resolve", "closed-form"):
        _fail(spec, E_OPTION, "command", "method", "method must be 'resolve' or 'closed-form'")
    A = build_algebra(spec)
    if name in ("yoneda", "bgg") and not isinstance(A, ExteriorAlgebra):
        _fail(spec, E_OPTION, "command", "name", f"{name} needs an exterior algebra")
    if name in ("ci-check", "normal-form") and not isinstance(A, QuotientRing):
        _fail(spec, E_OPTION, "command", "name", f"{name} needs a quotient ring")
    if spec.get("command", "method") == "closed-form":
        if not (isinstance(A, ExteriorAlgebra) and A.ngens == 1 and spec.get("module", "kind") == "residue-field"
                and name == "betti"):
            _fail(spec, E_OPTION, "command", "method",
                  "closed-form is only available for betti of k over one exterior generator")
    if name == "normal-form":
        try:
            A.normal_form(spec.get("command", "poly"))
        except PolynomialSyntaxError as e:
            _fail(spec, E_POLY, "command", "poly", e.message, e.column)
    build_module(spec, A)


def build_field(spec: JobSpec) -> FieldSpec:
    if "field" not in spec.sections:
        return FieldSpec.prime(101)
    kind = spec.get("field", "kind", "prime")
    try:
        if kind == "prime":
            return FieldSpec.prime(spec.get("field", "p", 101))
        if kind == "rational":
            if "p" in spec.sections["field"]:
                _fail(spec, E_VALUE, "field", "p", "the rational field takes no p")
            return FieldSpec.rational()
    except ValueError as e:
        _fail(spec, E_VALUE, "field", "p", str(e))
    _fail(spec, E_VALUE, "field", "kind", "field kind must be 'prime' or 'rational'")


def build_algebra(spec: JobSpec):
    F = build_field(spec)
    kind = _require(spec, "algebra", "kind")
    if kind == "exterior":
        degs = _int_list(spec, "algebra", "degrees", _require(spec, "algebra", "degrees"))
        for i, d in enumerate(degs):
            if d < 1 or d % 2 == 0:
                line, col = spec.where("algebra", "degrees")
                raw_col = _item_column(spec, "algebra", "degrees", i)
                raise JobError(E_EVEN, "exterior generator degree must be odd", line, raw_col or col)
        return ExteriorAlgebra(degs, F)
    if kind == "quotient":
        e = _require(spec, "algebra", "variables")
        if not isinstance(e, int) or e < 1:
            _fail(spec, E_VALUE, "algebra", "variables", "variables must be a positive integer")
        rels = _require(spec, "algebra", "relations")
        if not isinstance(rels, list) or not all(isinstance(r, str) for r in rels):
            _fail(spec, E_VALUE, "algebra", "relations", "relations must be a list of strings")
        try:
            return QuotientRing(e, rels, F)
        except PolynomialSyntaxError as err:
            i = getattr(err, "relation_index", None)
            col = _item_column(spec, "algebra", "relations", i) if i is not None else 0
            line, vcol = spec.where("algebra", "relations")
            raise JobError(E_POLY, err.message, line, (col + err.column - 1) if col else vcol) from None
        except (RelationError, InfiniteQuotientError) as err:
            _fail(spec, E_RELATION, "algebra", "relations", str(err))
    _fail(spec, E_VALUE, "algebra", "kind", "algebra kind must be 'exterior' or 'quotient'")


def _item_column(spec: JobSpec, section: str, key: str, index: int) -> int:
    """1-based column just inside the index-th list item (after an opening quote)."""
    line, col = spec.where(section, key)
    if not line or index is None or line > len(spec.lines):
        return 0
    text = spec.lines[line - 1]
    depth = 0
    item = 0
    i = col - 1
    while i < len(text):
        ch = text[i]
        if ch == "[":
            depth += 1
            if depth == 1 and index == 0:
                j = i + 1
                while j < len(text) and text[j] == " ":
                    j += 1
                return j + 1 + (1 if j < len(text) and text[j] == '"' else 0)
        elif ch == '"':
            i = text.index('"', i + 1)
        elif ch == "," and depth == 1:
            item += 1
            if item == index:
                j = i + 1
                while j < len(text) and text[j] == " ":
                    j += 1
                return j + 1 + (1 if j < len(text) and text[j] == '"' else 0)
        elif ch == "]":
            depth -= 1
        i += 1
    return 0


def build_module(spec: JobSpec, A=None):
    A = A if A is not None else build_algebra(spec)
    kind = _require(spec, "module", "kind")
    try:
        if kind == "residue-field":
            deg = spec.get("module", "degree", 0)
            if not isinstance(deg, int):
                _fail(spec, E_VALUE, "module", "degree", "degree must be an integer")
            return residue_field(A, deg)
        if kind == "algebra":
            return algebra_module(A)
        if kind == "quotient-by-generators":
            kill = _int_list(spec, "module", "kill", _require(spec, "module", "kill"))
            return quotient_by_generators(A, kill)
        if kind == "explicit":
            degs = _int_list(spec, "module", "degrees", _require(spec, "module", "degrees"))
            acts = _require(spec, "module", "actions")
            return explicit_module(A, degs, acts, spec.get("module", "differential"), spec.get("module", "labels"))
        if kind == "cokernel":
            gd = _int_list(spec, "module", "gen_degrees", _require(spec, "module", "gen_degrees"))
            cols = _require(spec, "module", "columns")
            return cokernel_module(A, gd, cols)
    except ModuleValidationError as e:
        _fail(spec, E_MODULE, "module", "kind", str(e))
    except (ValueError, TypeError, IndexError) as e:
        if isinstance(e, JobError):
            raise
        _fail(spec, E_MODULE, "module", "kind", f"cannot build module: {e}")
    _fail(spec, E_VALUE, "module", "kind", f"module kind must be one of {', '.join(MODULE_KINDS)}")


def emit(spec: JobSpec) -> str:
    """Canonical text of a job; ``parse_job(emit(s)) == s``."""
    out = []
    for sec in SECTIONS:
        if sec not in spec.sections:
            continue
        if out:
            out.append("")
        out.append(f"[{sec}]")
        for key in sorted(spec.sections[sec], key=_key_order(sec)):
            v = spec.sections[sec][key]
            text = v if isinstance(v, str) and _WORD.match(v) and not _looks_json(v) else json.dumps(v)
            out.append(f"{key} = {text}")
    return "\n".join(out) + "\n"


def _looks_json(s: str) -> bool:
    try:
        json.loads(s)
        return True
    except json.JSONDecodeError:
        return False


def _key_order(sec: str):
    first = {"field": ["kind", "p"], "algebra": ["kind"], "module": ["kind"], "command": ["name"]}[sec]
    return lambda k: (0, first.index(k)) if k in first else (1, k)
