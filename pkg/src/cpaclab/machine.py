"""Step-bounded unlimited register machines with a total program numbering.

Instructions are ``INC r``, ``DEC r`` (saturating at 0), ``ZERO r``,
``JZ r l`` (jump to ``l`` when register ``r`` holds 0) and ``HALT``.  A jump
past the end of the program, or running off the end, halts the machine.
Every executed instruction, ``HALT`` included, costs one step.

I/O convention: an input ``(x_1, ..., x_m)`` is loaded into registers
``1..m`` with register 0 set to ``m``; every other register starts at 0.  The
output is read from registers ``1..k`` where ``k`` is the final content of
register 0, or the arity requested by the caller.

Program numbering: an instruction is numbered ``0`` for ``HALT`` and
``1 + 4q + op`` otherwise (op 0..3 = ZERO, INC, DEC, JZ; for JZ the operand
``q`` is ``pair(r, l)``).  A program is the Elias-gamma concatenation of
``number + 1`` for each instruction, read as the binary digits after the
leading 1 of ``code + 1``.  Decoding is total: incomplete trailing bits are
ignored, so ``decode_program(encode_program(p)) == p`` but not conversely.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence, Union

from .codec import pair, unpair

__all__ = [
    "Instr",
    "Halted",
    "OutOfBudget",
    "UNBOUNDED",
    "encode_instruction",
    "decode_instruction",
    "encode_program",
    "decode_program",
    "run",
    "binary_output_at_exact_step",
    "prefix_adapter",
    "pair_enum",
    "index_of_program",
    "constant_program",
    "program_to_json",
    "program_from_json",
]

UNBOUNDED = math.inf

OPS = ("ZERO", "INC", "DEC", "JZ")


class Instr(NamedTuple):
    op: str
    r: int = 0
    target: int = 0

    def __str__(self) -> str:
        if self.op == "HALT":
            return "HALT"
        if self.op == "JZ":
            return f"JZ {self.r} {self.target}"
        return f"{self.op} {self.r}"


Program = tuple[Instr, ...]
ProgramLike = Union[int, Sequence[Instr]]


@dataclass(frozen=True)
class Halted:
    output: tuple[int, ...]
    steps: int

    halted = True


@dataclass(frozen=True)
class OutOfBudget:
    budget: int

    halted = False


def encode_instruction(ins: Instr) -> int:
    if ins.op == "HALT":
        return 0
    if ins.op not in OPS:
        raise ValueError(f"unknown opcode {ins.op!r}")
    if ins.r < 0 or ins.target < 0:
        raise ValueError(f"negative operand in {ins}")
    q = pair(ins.r, ins.target) if ins.op == "JZ" else ins.r
    return 1 + 4 * q + OPS.index(ins.op)


def decode_instruction(n: int) -> Instr:
    if n == 0:
        return Instr("HALT")
    q, op = divmod(n - 1, 4)
    if OPS[op] == "JZ":
        r, target = unpair(q)
        return Instr("JZ", r, target)
    return Instr(OPS[op], q)


def _gamma(v: int) -> str:
    b = bin(v)[2:]
    return "0" * (len(b) - 1) + b


def encode_program(program: Sequence[Instr]) -> int:
    bits = "".join(_gamma(encode_instruction(ins) + 1) for ins in program)
    return int("1" + bits, 2) - 1


@lru_cache(maxsize=4096)
def decode_program(code: int) -> Program:
    if code < 0:
        raise ValueError("program codes are naturals")
    bits = bin(code + 1)[3:]
    out = []
    i = 0
    while True:
        z = 0
        while i + z < len(bits) and bits[i + z] == "0":
            z += 1
        if i + 2 * z + 1 > len(bits):
            break
        v = int(bits[i + z : i + 2 * z + 1], 2)
        out.append(decode_instruction(v - 1))
        i += 2 * z + 1
    return tuple(out)


def _as_program(p: ProgramLike) -> Program:
    if isinstance(p, int):
        return decode_program(p)
    return tuple(p)


def run(
    program: ProgramLike,
    inputs: Sequence[int],
    budget: int,
    arity: Optional[int] = None,
) -> Union[Halted, OutOfBudget]:
    """Run for at most ``budget`` steps."""
    if budget < 0:
        raise ValueError("budget must be a natural")
    prog = _as_program(program)
    regs: dict[int, int] = {0: len(inputs)}
    for i, x in enumerate(inputs, 1):
        if x < 0:
            raise ValueError("inputs must be naturals")
        regs[i] = x
    length = len(prog)
    pc = 0
    steps = 0
    while pc < length:
        if steps == budget:
            return OutOfBudget(budget)
        op, r, target = prog[pc]
        steps += 1
        if op == "INC":
            regs[r] = regs.get(r, 0) + 1
        elif op == "DEC":
            v = regs.get(r, 0)
            if v:
                regs[r] = v - 1
        elif op == "ZERO":
            regs[r] = 0
        elif op == "JZ":
            if not regs.get(r, 0):
                pc = target
                continue
        else:
            break
        pc += 1
    k = regs[0] if arity is None else arity
    return Halted(tuple(regs.get(i, 0) for i in range(1, k + 1)), steps)


def binary_output_at_exact_step(
    program: ProgramLike, inputs: Sequence[int], s: int, arity: int
) -> Optional[tuple[int, ...]]:
    """The binary output if the machine halts after exactly ``s`` steps."""
    if arity < 1:
        raise ValueError("arity must be at least 1")
    res = run(program, inputs, s, arity)
    if not res.halted or res.steps != s:
        return None
    if any(v > 1 for v in res.output):
        return None
    return res.output


def prefix_adapter(
    w: ProgramLike,
    prefix: Sequence[int],
    take_last: int,
    total_out: int,
    in_arity: Optional[int] = None,
) -> int:
    """Code of a program computing ``x -> last take_last entries of w(prefix + x)``.

    ``w`` is read as producing a ``total_out``-tuple.  The adapter expects
    inputs of length ``in_arity`` (default ``total_out - len(prefix)``, the
    shape of a witness map).  Rather than shifting the inputs, ``w``'s
    registers are renamed so that its registers ``len(prefix)+1..`` are the
    adapter's input registers; prefix values and ``w``'s register 0 live in
    fresh registers.  The adapter halts iff the simulated run halts.
    """
    if take_last > total_out:
        raise ValueError("take_last cannot exceed total_out")
    if take_last < 0:
        raise ValueError("take_last must be a natural")
    body_src = _as_program(w)
    p = len(prefix)
    n = total_out - p if in_arity is None else in_arity
    if n < 0:
        raise ValueError("prefix longer than the output arity")

    wregs = {0} | set(range(1, max(p + n, total_out) + 1))
    wregs |= {ins.r for ins in body_src if ins.op != "HALT"}
    nxt = max(n, take_last) + 1
    rename: dict[int, int] = {}
    for q in sorted(wregs):
        if p < q <= p + n:
            rename[q] = q - p
        else:
            rename[q] = nxt
            nxt += 1
    zero_reg = nxt
    nxt += 1

    sources = [rename[total_out - take_last + j] for j in range(1, take_last + 1)]
    aligned = sources == list(range(1, take_last + 1)) and take_last == n
    temps = [] if aligned else list(range(nxt, nxt + take_last))

    fresh = sorted(v for q, v in rename.items() if not p < q <= p + n)
    pre: list[Instr] = [Instr("ZERO", f) for f in fresh + [zero_reg] + temps]
    pre += [Instr("INC", rename[0])] * (p + n)
    for i, v in enumerate(prefix, 1):
        if v < 0:
            raise ValueError("prefix entries must be naturals")
        pre += [Instr("INC", rename[i])] * v

    off = len(pre)
    epi_start = off + len(body_src)
    body: list[Instr] = []
    for ins in body_src:
        if ins.op == "HALT":
            body.append(Instr("HALT") if aligned else Instr("JZ", zero_reg, epi_start))
        elif ins.op == "JZ":
            tgt = ins.target + off if ins.target < len(body_src) else epi_start
            body.append(Instr("JZ", rename[ins.r], tgt))
        else:
            body.append(Instr(ins.op, rename[ins.r]))

    epi: list[Instr] = []
    if not aligned:

        def move(src: int, dst: int) -> None:
            at = epi_start + len(epi)
            epi.extend(
                [
                    Instr("JZ", src, at + 4),
                    Instr("DEC", src),
                    Instr("INC", dst),
                    Instr("JZ", zero_reg, at),
                ]
            )

        for src, tmp in zip(sources, temps):
            move(src, tmp)
        for j, tmp in enumerate(temps, 1):
            epi.append(Instr("ZERO", j))
            move(tmp, j)
        epi.append(Instr("ZERO", 0))
        epi += [Instr("INC", 0)] * take_last
    return encode_program(pre + body + epi)


def _is_unbounded(r) -> bool:
    return r is None or r == math.inf


def pair_enum(j: int, rng=UNBOUNDED) -> tuple[int, int]:
    """The ``j``-th (program code, arity) pair; arities run over ``1..rng``."""
    c, i = unpair(j)
    if _is_unbounded(rng):
        return c, i + 1
    if rng < 1:
        raise ValueError("range must be at least 1")
    return c, i % rng + 1


def index_of_program(code: int, k: int, rng=UNBOUNDED) -> int:
    """Least ``j`` with ``pair_enum(j, rng) == (code, k)``."""
    if k < 1 or (not _is_unbounded(rng) and k > rng):
        raise ValueError(f"arity {k} outside 1..{rng}")
    return pair(code, k - 1)


def constant_program(values: Sequence[int]) -> int:
    """Code of a program writing ``values`` into registers ``1..len(values)``."""
    prog: list[Instr] = []
    for r, v in enumerate(values, 1):
        prog.append(Instr("ZERO", r))
        prog += [Instr("INC", r)] * v
    return encode_program(prog)


def program_to_json(program: ProgramLike) -> str:
    out = []
    for ins in _as_program(program):
        d: dict = {"op": ins.op}
        if ins.op != "HALT":
            d["r"] = ins.r
        if ins.op == "JZ":
            d["target"] = ins.target
        out.append(d)
    return json.dumps(out)


def program_from_json(text: str) -> Program:
    items = json.loads(text)
    if not isinstance(items, list):
        raise ValueError("a program is a JSON array of instructions")
    prog = []
    for d in items:
        op = d["op"]
        if op == "HALT":
            prog.append(Instr("HALT"))
        elif op == "JZ":
            prog.append(Instr("JZ", int(d["r"]), int(d["target"])))
        elif op in OPS:
            prog.append(Instr(op, int(d["r"])))
        else:
            raise ValueError(f"unknown opcode {op!r}")
    return tuple(prog)
