"""Simple restricted g_[0] = osp(1|2) modules L0(lam), lam in F_p.

Basis v_{lam,k,l} ordered (k, l) lexicographically with l inner:
0 <= k <= lam, l in {0, 1}, k + l <= lam (just v_0 when lam = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gfp import MatrixGF, check_modulus, matpow
from .hamalg import OSP_PARITY, HamAlgebra, osp_generators

GENERATORS = ("h", "e", "f", "E", "F")


def l0_basis(lam: int) -> list[tuple[int, int]]:
    if lam == 0:
        return [(0, 0)]
    return [(k, l) for k in range(lam + 1) for l in (0, 1) if k + l <= lam]


@dataclass
class L0Module:
    p: int
    lam: int
    basis: list
    action: dict = field(default_factory=dict)  # generator name -> MatrixGF

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def parity(self) -> np.ndarray:
        return np.array([l for _, l in self.basis], dtype=np.int64)

    def matrix(self, name: str) -> MatrixGF:
        return self.action[name]

    def dense(self, name: str) -> np.ndarray:
        return self.action[name].to_dense()

    def dump(self) -> str:
        lines = ["L0(%d) over F_%d, basis %s" % (self.lam, self.p, self.basis)]
        for g in GENERATORS:
            lines.append("%s =" % g)
            lines.append(str(self.dense(g)))
        return "\n".join(lines)


def build_l0(lam: int, p: int) -> L0Module:
    """Materialise the action table of h, e, f, E, F on L0(lam)."""
    check_modulus(p)
    lam = int(lam) % p
    basis = l0_basis(lam)
    pos = {v: i for i, v in enumerate(basis)}
    d = len(basis)
    mats = {g: np.zeros((d, d), dtype=np.int64) for g in GENERATORS}

    def put(g, src, dst, c):
        # out-of-range targets are zero vectors
        if dst in pos and c % p:
            mats[g][pos[dst], pos[src]] += c

    if lam:
        for (k, l) in basis:
            src = (k, l)
            if l == 0:
                put("h", src, (k, 0), lam - 2 * k)
                put("F", src, (k, 1), 1)
                put("f", src, (k + 1, 0), 1)
                put("e", src, (k - 1, 0), k * (lam + 1 - k))
                put("E", src, (k - 1, 1), k)
            else:
                put("h", src, (k, 1), lam - 2 * k - 1)
                put("F", src, (k + 1, 0), -1)
                put("f", src, (k + 1, 1), 1)
                put("e", src, (k - 1, 1), k * (lam - k))
                put("E", src, (k, 0), lam - k)
    action = {g: MatrixGF(m % p, p) for g, m in mats.items()}
    return L0Module(p, lam, basis, action)


def basis_action(M: L0Module, alg: HamAlgebra) -> dict[int, np.ndarray]:
    """Dense action of every grade-0 canonical basis element of g on L0(lam)."""
    gens = osp_generators(alg)
    # each grade-0 basis element is +-1 times one osp generator
    out = {}
    for name, x in gens.items():
        (m, c), = x.coeffs.items()
        inv = pow(c, -1, M.p)
        out[alg.index[m]] = M.dense(name) * inv % M.p
    return out


def check_l0(M: L0Module, alg: HamAlgebra) -> dict:
    """Module law on all 25 ordered generator pairs, restrictedness, simplicity."""
    p = M.p
    gens = osp_generators(alg)
    act = basis_action(M, alg)
    failures = []
    for a in GENERATORS:
        for b in GENERATORS:
            br = alg.bracket(gens[a], gens[b])
            lhs = np.zeros((M.dim, M.dim), dtype=np.int64)
            for m, c in br.coeffs.items():
                lhs = lhs + c * act[alg.index[m]]
            s = (-1) ** (OSP_PARITY[a] * OSP_PARITY[b])
            A, B = M.dense(a), M.dense(b)
            rhs = A @ B - s * (B @ A)
            if not np.array_equal(lhs % p, rhs % p):
                failures.append("rho([%s,%s])" % (a, b))

    def rho(g):
        return M.matrix(g)

    zero = MatrixGF.zeros(M.dim, M.dim, p)
    identities = {
        "h^p = h": matpow(rho("h"), p) == rho("h"),
        "e^p = 0": matpow(rho("e"), p) == zero,
        "f^p = 0": matpow(rho("f"), p) == zero,
        "E^2 = e": matpow(rho("E"), 2) == rho("e"),
        "F^2 = -f": matpow(rho("F"), 2) == -rho("f"),
    }
    failures += [k for k, ok in identities.items() if not ok]

    from . import repkit

    mats = [rho(g) for g in GENERATORS]
    spins_full = all(
        repkit.spin([np.eye(M.dim, dtype=np.int64)[i]], mats, p).dim == M.dim
        for i in range(M.dim)
    )
    endo = repkit.endo_dim(mats, M.parity, p)
    if not spins_full:
        failures.append("not simple: some basis vector spins to a proper subspace")
    if endo != 1:
        failures.append("End has dimension %d" % endo)
    h_diag = np.diag(M.dense("h"))
    expected = [(M.lam - 2 * k - l) % p for k, l in M.basis] if M.lam else [0]
    return {
        "passed": not failures,
        "failures": failures,
        "dim": M.dim,
        "endo_dim": endo,
        "trace_h": int(h_diag.sum() % p),
        "trace_h_rule": int(sum(expected) % p),
    }
