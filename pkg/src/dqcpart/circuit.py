"""Gate-list circuit IR and an OpenQASM 2.0 subset reader/writer."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction


class Origin(str, enum.Enum):
    REAL = "Real"
    RANDOM = "Random"
    GENERATED = "Generated"

    @classmethod
    def parse(cls, value: str) -> "Origin":
        for o in cls:
            if o.value.lower() == str(value).strip().lower():
                return o
        raise ValueError(f"unknown circuit origin {value!r}")


# name -> (arity, number of parameters)
GATE_SET: dict[str, tuple[int, int]] = {
    "h": (1, 0), "x": (1, 0), "y": (1, 0), "z": (1, 0),
    "s": (1, 0), "sdg": (1, 0), "t": (1, 0), "tdg": (1, 0),
    "rx": (1, 1), "ry": (1, 1), "rz": (1, 1), "u": (1, 3),
    "cx": (2, 0), "cz": (2, 0), "cp": (2, 1), "crz": (2, 1), "swap": (2, 0),
    "ccx": (3, 0), "cswap": (3, 0),
}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if not self.qubits:
            raise ValueError(f"gate {self.name} has no qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"gate {self.name} repeats a qubit: {self.qubits}")
        if min(self.qubits) < 0:
            raise ValueError(f"negative qubit index in {self.name}")

    @property
    def arity(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    id: str = ""
    origin: Origin = Origin.REAL

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValueError(
                    f"gate {g.name}{g.qubits} outside {self.num_qubits}-qubit circuit"
                )


@dataclass(frozen=True)
class GateStats:
    total_gates: int
    multiqubit_gates: int
    multiqubit_fraction: float
    max_arity: int


def gate_stats(c: Circuit) -> GateStats:
    total = len(c.gates)
    mq = sum(1 for g in c.gates if g.arity >= 2)
    max_arity = max((g.arity for g in c.gates), default=0)
    return GateStats(total, mq, mq / total if total else 0.0, max_arity)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class QasmError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


class QasmSyntaxError(QasmError):
    pass


class UnsupportedConstruct(QasmError):
    pass


class UndeclaredQubit(QasmError):
    pass


@dataclass
class _Stmt:
    text: str
    line: int
    col: int


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_QREG_RE = re.compile(rf"^qreg\s+({_IDENT})\s*\[\s*(\d+)\s*\]$")
_CREG_RE = re.compile(rf"^creg\s+({_IDENT})\s*\[\s*(\d+)\s*\]$")
_GATE_RE = re.compile(rf"^({_IDENT})\s*(?:\((.*)\))?\s*(.*)$", re.S)
_ARG_RE = re.compile(rf"^({_IDENT})\s*\[\s*(\d+)\s*\]$")
_IF_RE = re.compile(rf"^if\s*\(\s*{_IDENT}\s*==\s*\d+\s*\)\s*(.+)$", re.S)
_NUM = r"(?:\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
_PARAM_RE = re.compile(
    rf"^(?P<sign>[+-])?\s*(?:(?P<pi>(?:(?P<mul>{_NUM})\s*\*\s*)?pi(?:\s*/\s*(?P<div>{_NUM}))?)|(?P<num>{_NUM}))$"
)


def _statements(text: str):
    """Split source into ``;``-terminated statements, dropping ``//`` comments."""
    stmts = []
    buf: list[str] = []
    start = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        for col, ch in enumerate(line, start=1):
            if ch == "}":
                # closes a gate body; the definition itself is rejected later
                buf.append(ch)
                stmts.append(_Stmt("".join(buf).strip(), *(start or (lineno, col))))
                buf, start = [], None
                continue
            if ch == ";":
                body = "".join(buf).strip()
                if not body:
                    raise QasmSyntaxError("empty statement", lineno, col)
                stmts.append(_Stmt(body, *start))
                buf, start = [], None
                continue
            if start is None and not ch.isspace():
                start = (lineno, col)
            if start is not None:
                buf.append(ch)
        if start is not None:
            buf.append(" ")
    if start is not None:
        raise QasmSyntaxError("missing ';' at end of statement", *start)
    return stmts


def _parse_param(tok: str, st: _Stmt) -> float:
    m = _PARAM_RE.match(tok.strip())
    if m is None:
        raise UnsupportedConstruct(f"parameter expression {tok.strip()!r}", st.line, st.col)
    sign = -1.0 if m.group("sign") == "-" else 1.0
    if m.group("pi") is not None:
        mul = float(m.group("mul")) if m.group("mul") else 1.0
        div = float(m.group("div")) if m.group("div") else 1.0
        if div == 0:
            raise QasmSyntaxError("division by zero in parameter", st.line, st.col)
        return sign * (mul * math.pi) / div
    return sign * float(m.group("num"))


def parse_qasm(text: str, circuit_id: str = "", origin: Origin = Origin.REAL) -> Circuit:
    """Parse the supported OpenQASM 2.0 subset into a flat-register Circuit.

    ``measure``, ``barrier``, ``creg`` and classically conditioned
    statements are accepted and dropped.
    """
    stmts = _statements(text)
    if not stmts or not re.fullmatch(r"OPENQASM\s+2(\.0)?", stmts[0].text):
        where = (stmts[0].line, stmts[0].col) if stmts else (1, 1)
        raise QasmSyntaxError("expected 'OPENQASM 2.0;' header", *where)

    offsets: dict[str, tuple[int, int]] = {}
    width = 0
    gates: list[Gate] = []
    for st in stmts[1:]:
        body = st.text
        head = body.split(None, 1)[0] if body.split() else ""
        if head == "include":
            continue
        if head == "qreg":
            m = _QREG_RE.match(body)
            if m is None:
                raise QasmSyntaxError(f"malformed qreg: {body!r}", st.line, st.col)
            name, size = m.group(1), int(m.group(2))
            if name in offsets:
                raise QasmSyntaxError(f"register {name} redeclared", st.line, st.col)
            offsets[name] = (width, size)
            width += size
            continue
        if head == "creg":
            if _CREG_RE.match(body) is None:
                raise QasmSyntaxError(f"malformed creg: {body!r}", st.line, st.col)
            continue
        if head in ("measure", "barrier"):
            continue
        if re.match(r"if\s*\(", body):
            if _IF_RE.match(body) is None:
                raise QasmSyntaxError(f"malformed conditional: {body!r}", st.line, st.col)
            continue
        if head in ("gate", "opaque"):
            raise UnsupportedConstruct("custom gate definitions", st.line, st.col)
        gates.append(_parse_gate(body, st, offsets))

    if width == 0:
        raise QasmSyntaxError("no quantum register declared", stmts[0].line, stmts[0].col)
    return Circuit(num_qubits=width, gates=tuple(gates), id=circuit_id, origin=origin)


def _parse_gate(body: str, st: _Stmt, offsets) -> Gate:
    m = _GATE_RE.match(body)
    if m is None:
        raise QasmSyntaxError(f"cannot parse statement {body!r}", st.line, st.col)
    name, ptext, args = m.group(1), m.group(2), m.group(3).strip()
    if name not in GATE_SET:
        raise UnsupportedConstruct(f"gate or statement '{name}'", st.line, st.col)
    arity, nparams = GATE_SET[name]
    params = [] if ptext is None or not ptext.strip() else [
        _parse_param(p, st) for p in ptext.split(",")
    ]
    if len(params) != nparams:
        raise QasmSyntaxError(
            f"{name} takes {nparams} parameter(s), got {len(params)}", st.line, st.col
        )
    if not args:
        raise QasmSyntaxError(f"{name} has no qubit arguments", st.line, st.col)
    qubits = []
    for a in args.split(","):
        am = _ARG_RE.match(a.strip())
        if am is None:
            if re.fullmatch(_IDENT, a.strip()):
                raise UnsupportedConstruct(
                    f"register broadcast argument {a.strip()!r}", st.line, st.col
                )
            raise QasmSyntaxError(f"malformed qubit argument {a.strip()!r}", st.line, st.col)
        reg, idx = am.group(1), int(am.group(2))
        if reg not in offsets or idx >= offsets[reg][1]:
            raise UndeclaredQubit(f"undeclared qubit {reg}[{idx}]", st.line, st.col)
        qubits.append(offsets[reg][0] + idx)
    if len(qubits) != arity:
        raise QasmSyntaxError(f"{name} acts on {arity} qubit(s), got {len(qubits)}", st.line, st.col)
    if len(set(qubits)) != len(qubits):
        raise QasmSyntaxError(f"{name} repeats a qubit argument", st.line, st.col)
    return Gate(name, tuple(qubits), tuple(params))


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------

def format_param(x: float) -> str:
    """Render an angle, preferring an exact ``k*pi/m`` form when one round-trips."""
    if x == 0:
        return "0"
    frac = Fraction(x / math.pi).limit_denominator(4096)
    if frac != 0:
        sign = "-" if frac < 0 else ""
        num, den = abs(frac.numerator), frac.denominator
        if (-1.0 if sign else 1.0) * (num * math.pi) / den == x:
            text = "pi" if num == 1 else f"{num}*pi"
            return sign + (text if den == 1 else f"{text}/{den}")
    return repr(float(x))


def write_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    for g in c.gates:
        if g.name not in GATE_SET:
            raise UnsupportedConstruct(f"cannot emit gate '{g.name}'")
        arity, nparams = GATE_SET[g.name]
        if g.arity != arity or len(g.params) != nparams:
            raise ValueError(f"gate {g.name} has wrong arity or parameter count")
        p = f"({','.join(format_param(v) for v in g.params)})" if g.params else ""
        lines.append(f"{g.name}{p} " + ",".join(f"q[{q}]" for q in g.qubits) + ";")
    return "\n".join(lines) + "\n"
