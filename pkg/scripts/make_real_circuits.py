"""Write a handful of textbook algorithm circuits as QASM for smoke runs.

Cuccaro ripple-carry adders and Bernstein-Vazirani oracles, built gate by gate.
usage: python scripts/make_real_circuits.py [OUT_DIR]
"""

import sys
from pathlib import Path

from dqcpart.circuit import Circuit, Gate, Origin, write_qasm


def cuccaro_adder(bits: int) -> Circuit:
    # layout: c0, then interleaved b_i, a_i, then the carry-out z
    n = 2 * bits + 2
    c0, z = 0, n - 1
    a = [2 + 2 * i for i in range(bits)]
    b = [1 + 2 * i for i in range(bits)]
    g = []

    def maj(x, y, w):
        g.extend([Gate("cx", (w, y)), Gate("cx", (w, x)), Gate("ccx", (x, y, w))])

    def uma(x, y, w):
        g.extend([Gate("ccx", (x, y, w)), Gate("cx", (w, x)), Gate("cx", (x, y))])

    for i in range(bits):
        g.append(Gate("x", (a[i],)))  # load a = 11..1
    maj(c0, b[0], a[0])
    for i in range(1, bits):
        maj(a[i - 1], b[i], a[i])
    g.append(Gate("cx", (a[-1], z)))
    for i in range(bits - 1, 0, -1):
        uma(a[i - 1], b[i], a[i])
    uma(c0, b[0], a[0])
    return Circuit(n, tuple(g), f"adder-{bits}", Origin.REAL)


def bernstein_vazirani(secret: str) -> Circuit:
    n = len(secret) + 1
    anc = n - 1
    g = [Gate("x", (anc,))] + [Gate("h", (q,)) for q in range(n)]
    g += [Gate("cx", (q, anc)) for q, bit in enumerate(secret) if bit == "1"]
    g += [Gate("h", (q,)) for q in range(n - 1)]
    return Circuit(n, tuple(g), f"bv-{len(secret)}", Origin.REAL)


def main(out_dir="scripts/circuits/real"):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    circuits = [cuccaro_adder(5), cuccaro_adder(8), cuccaro_adder(11),
                bernstein_vazirani("101101011"), bernstein_vazirani("110110101101011011")]
    for c in circuits:
        (out / f"{c.id}.qasm").write_text(write_qasm(c))
        print(out / f"{c.id}.qasm")


if __name__ == "__main__":
    main(*sys.argv[1:])
