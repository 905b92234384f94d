"""Representation-theoretic verdicts on explicit modules.

Modules are given by lists of action matrices (MatrixGF or dense arrays) of a
generating set.  Helpers at the bottom pull those lists out of L0 and Kac
modules.
"""

from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .gfp import (
    Echelon,
    MatrixGF,
    TrackedEchelon,
    as_array,
    kernel_array,
    matpow,
    mulmod,
    rref_array,
)

log = logging.getLogger(__name__)

HOM_BUDGET = 250_000
MEATAXE_BUDGET = 64


class BudgetExceeded(RuntimeError):
    pass


def _mats(gens, p):
    return [g if isinstance(g, MatrixGF) else MatrixGF(np.asarray(g), p) for g in gens]


# ---------------------------------------------------------------------------
# spinning


@dataclass
class SubmoduleBasis:
    ambient: int
    basis: np.ndarray  # rows, reduced echelon, sorted by pivot
    certified: bool = False

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def proper(self) -> bool:
        return 0 < self.dim < self.ambient


def spin(seeds, gens, p: int) -> SubmoduleBasis:
    """Smallest subspace containing the seeds and stable under every generator.

    Works a whole frontier at a time: the images of the newest echelon rows
    under every generator are reduced together.
    """
    gens = _mats(gens, p)
    seeds = [np.asarray(s, dtype=np.int64) % p for s in seeds]
    n = seeds[0].shape[0] if seeds else (gens[0].shape[0] if gens else 0)
    E = Echelon(n, p)
    if seeds:
        frontier = E.insert_many(np.vstack(seeds))
        while frontier.shape[0] and E.dim < n:
            images = np.vstack([(g @ frontier.T).T for g in gens])
            frontier = E.insert_many(images)
    basis = E.basis() if E.dim else np.zeros((0, n), dtype=np.int64)
    return SubmoduleBasis(n, basis, certified=True)


def is_invariant(sub: SubmoduleBasis, gens, p: int) -> bool:
    """Rank check: every generator keeps the span."""
    if sub.dim in (0, sub.ambient):
        return True
    E = Echelon(sub.ambient, p)
    for row in sub.basis:
        E.insert(row)
    for g in gens:
        img = as_array(g, p) @ sub.basis.T % p
        for col in img.T:
            if not E.contains(col):
                return False
    return True


# ---------------------------------------------------------------------------
# intertwiners


def _selector(parity_N, want: int) -> np.ndarray:
    cols = np.flatnonzero(parity_N % 2 == want)
    S = np.zeros((parity_N.shape[0], cols.size), dtype=np.int64)
    S[cols, np.arange(cols.size)] = 1
    return S


def _hom_part(gM, gN, par_M, par_N, p: int, odd: int, budget: int) -> int:
    """dim of {T : T rho_M(g) = rho_N(g) T for all g}, T of parity ``odd``.

    Spins cyclic seeds of M while carrying Phi_j = T b_j as an (m x k) matrix
    in the k remaining unknowns; each linear relation among spun vectors cuts
    the unknowns down to a kernel.
    """
    n, m = len(par_M), len(par_N)
    if n == 0 or m == 0:
        return 0
    if n * m > budget:
        raise BudgetExceeded(
            "hom system has %d unknowns, budget %d" % (n * m, budget))
    E = TrackedEchelon(n, p)
    vecs: list[np.ndarray] = []
    Phi = np.zeros((n, m, 0), dtype=np.int64)
    k = 0
    for j in range(n):
        if E.dim == n:
            break
        seed = np.zeros(n, dtype=np.int64)
        seed[j] = 1
        if E.contains(seed):
            continue
        # a standard seed has the parity of coordinate j
        S = _selector(par_N, (par_M[j] + odd) % 2)
        Phi = np.concatenate([Phi, np.zeros((n, m, S.shape[1]), dtype=np.int64)], axis=2)
        E.insert(seed)
        vecs.append(seed)
        Phi[len(vecs) - 1, :, k:] = S
        k += S.shape[1]
        head = len(vecs) - 1
        while head < len(vecs):
            i = head
            head += 1
            for gi in range(len(gM)):
                u = gM[gi] @ vecs[i]
                image = mulmod(gN[gi], Phi[i], p)
                if E.insert(u):
                    vecs.append(u)
                    Phi[len(vecs) - 1] = image
                    continue
                c = E.coords(u)
                r = len(vecs)
                expect = mulmod(c[None, :], Phi[:r].reshape(r, -1), p).reshape(m, k)
                R = (image - expect) % p
                if not R.any():
                    continue
                C = kernel_array(R, p).T
                k = C.shape[1]
                if k == 0:
                    return 0
                Phi = mulmod(Phi.reshape(-1, Phi.shape[2]), C, p).reshape(n, m, k)
    return k


def hom_space(gens_M, gens_N, par_M, par_N, p: int, budget: int = HOM_BUDGET) -> dict:
    """Even and odd intertwiner dimensions.  Generators are paired by position."""
    par_M = np.asarray(par_M, dtype=np.int64)
    par_N = np.asarray(par_N, dtype=np.int64)
    gM, gN = _mats(gens_M, p), _mats(gens_N, p)
    even = _hom_part(gM, gN, par_M, par_N, p, 0, budget)
    odd = _hom_part(gM, gN, par_M, par_N, p, 1, budget)
    return {"even": even, "odd": odd, "total": even + odd}


def hom_dim(gens_M, gens_N, par_M, par_N, p: int, budget: int = HOM_BUDGET) -> int:
    return hom_space(gens_M, gens_N, par_M, par_N, p, budget)["total"]


def endo_dim(gens, parity, p: int, budget: int | None = None) -> int:
    n = len(parity)
    return hom_dim(gens, gens, parity, parity, p, budget or max(HOM_BUDGET, n * n))


# ---------------------------------------------------------------------------
# Norton irreducibility test


@dataclass
class IrreducibilityCertificate:
    verdict: str  # irreducible | reducible | inconclusive
    seed: int
    attempts: int
    theta: list = field(default_factory=list)  # [(coeff, word), ...] of the last element tried
    shift: int | None = None
    nullity: int | None = None
    spin_dims: list = field(default_factory=list)
    dual_spin_dim: int | None = None
    subspace: np.ndarray | None = None
    endo_dim: int | None = None

    @property
    def absolutely_irreducible(self) -> bool:
        return self.verdict == "irreducible" and self.endo_dim == 1

    def summary(self) -> dict:
        return {
            "verdict": self.verdict,
            "seed": self.seed,
            "attempts": self.attempts,
            "theta": [[c, list(w)] for c, w in self.theta],
            "shift": self.shift,
            "nullity": self.nullity,
            "spin_dims": list(self.spin_dims),
            "dual_spin_dim": self.dual_spin_dim,
            "subspace_dim": None if self.subspace is None else int(self.subspace.shape[0]),
            "endo_dim": self.endo_dim,
        }


def _random_element(rng, mats, p):
    n = mats[0].shape[0]
    theta = np.zeros((n, n), dtype=np.int64)
    terms = []
    for _ in range(int(rng.integers(1, 5))):
        length = int(rng.integers(1, 4))
        word = [int(w) for w in rng.integers(0, len(mats), size=length)]
        coeff = int(rng.integers(1, p))
        W = mats[word[0]]
        for w in word[1:]:
            W = W @ mats[w]
        theta = theta + coeff * W.to_dense()
        terms.append((coeff, tuple(word)))
    return theta % p, terms


def kernel_lines(K: np.ndarray, p: int):
    """One representative of every line in the row space of K."""
    k = K.shape[0]
    for lead in range(k):
        # normalise: first nonzero coordinate (in index lead) equal to 1
        free = k - lead - 1
        for tail in range(p ** free):
            c = np.zeros(k, dtype=np.int64)
            c[lead] = 1
            for j in range(free):
                c[lead + 1 + j] = tail % p
                tail //= p
            yield c @ K % p


def line_count(k: int, p: int) -> int:
    return (p ** k - 1) // (p - 1)


def meataxe(gens, parity, p: int, seed: int = 0, budget: int = MEATAXE_BUDGET,
            with_endo: bool = True, max_lines: int = 64) -> IrreducibilityCertificate:
    """Norton's test on the module spanned by the generator action matrices.

    Random elements theta of the action algebra are shifted by scalars until
    one has a small nonzero kernel.  Every line of that kernel is spun; a
    proper result proves reducibility.  If all of them spin to the whole space,
    a proper submodule U would have to meet ker(theta) trivially, which puts
    all of ker(theta^T) inside the annihilator of U.  So a single kernel vector
    of theta^T spinning to the whole dual proves irreducibility.
    """
    mats = _mats(gens, p)
    n = mats[0].shape[0] if mats else len(parity)
    rng = np.random.default_rng(seed)
    cert = IrreducibilityCertificate("inconclusive", seed, 0)
    if n == 0:
        return cert
    if n == 1:
        cert.verdict = "irreducible"
        cert.endo_dim = 1
        return cert
    mats_T = [g.T for g in mats]
    eye = np.eye(n, dtype=np.int64)
    for attempt in range(1, budget + 1):
        cert.attempts = attempt
        theta, terms = _random_element(rng, mats, p)
        best = None
        for c in range(p):
            K = kernel_array((theta - c * eye) % p, p)
            if K.shape[0] and (best is None or K.shape[0] < best[1].shape[0]):
                best = (c, K)
        if best is None:
            continue
        c, K = best
        if line_count(K.shape[0], p) > max_lines:
            # too many lines to finish the test; one kernel vector still probes
            S = spin([K[0]], mats, p)
            if S.dim < n:
                cert.theta, cert.shift, cert.nullity = terms, c, int(K.shape[0])
                cert.spin_dims = [S.dim]
                cert.verdict = "reducible"
                cert.subspace = S.basis
                return cert
            continue
        cert.theta, cert.shift, cert.nullity = terms, c, int(K.shape[0])
        cert.spin_dims = []
        for v in kernel_lines(K, p):
            S = spin([v], mats, p)
            cert.spin_dims.append(S.dim)
            if S.dim < n:
                cert.verdict = "reducible"
                cert.subspace = S.basis
                return cert
        KT = kernel_array((theta.T - c * eye) % p, p)
        S = spin([KT[0]], mats_T, p)
        cert.dual_spin_dim = S.dim
        if S.dim < n:
            # the annihilator of a proper invariant subspace of the dual
            cert.verdict = "reducible"
            cert.subspace = kernel_array(S.basis, p)
            return cert
        cert.verdict = "irreducible"
        if with_endo:
            cert.endo_dim = endo_dim(mats, parity, p)
        return cert
    return cert


# ---------------------------------------------------------------------------
# weights and singular vectors


def eigenspaces(h, p: int) -> dict[int, np.ndarray]:
    """Eigenvalue -> basis rows of ker(h - c).  Requires h^p = h."""
    H = h if isinstance(h, MatrixGF) else MatrixGF(np.asarray(h), p)
    if matpow(H, p) != H:
        raise ArithmeticError("rho(h)^p != rho(h): action is not restricted on h")
    n = H.shape[0]
    D = H.to_dense()
    out = {}
    for c in range(p):
        K = kernel_array((D - c * np.eye(n, dtype=np.int64)) % p, p)
        if K.shape[0]:
            out[c] = K
    return out


def weight_spaces(h, p: int) -> dict[int, int]:
    return {c: int(K.shape[0]) for c, K in eigenspaces(h, p).items()}


def singular_vectors(h, raising, p: int) -> list[tuple[int, np.ndarray]]:
    """Weight vectors killed by every raising operator, grouped by weight."""
    H = h if isinstance(h, MatrixGF) else MatrixGF(np.asarray(h), p)
    n = H.shape[0]
    if n == 0:
        return []
    # joint kernel, intersected one operator at a time
    K = np.eye(n, dtype=np.int64)
    for u in raising:
        U = as_array(u, p)
        img = U @ K.T % p
        C = kernel_array(img, p)
        if C.shape[0] == 0:
            return []
        K = C @ K % p
    out = []
    D = H.to_dense()
    for c in range(p):
        img = ((D - c * np.eye(n, dtype=np.int64)) @ K.T) % p
        C = kernel_array(img, p)
        for row in C:
            out.append((c, row @ K % p))
    return out


# ---------------------------------------------------------------------------
# modules as generator lists


def derived_seed(base: int, *labels) -> int:
    """Subsystem seed from a base seed and labels, by hashing."""
    text = "|".join([str(base)] + [str(x) for x in labels])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:4], "big")


def l0_generators(M):
    from .l0rep import GENERATORS
    return [M.matrix(g) for g in GENERATORS]


def direct_sum(gens_a, gens_b, p: int):
    """Block-diagonal generator matrices of A + B."""
    import scipy.sparse as sp
    return [
        MatrixGF(sp.block_diag([a.to_csr(), b.to_csr()], format="csr"), p)
        for a, b in zip(_mats(gens_a, p), _mats(gens_b, p))
    ]


# ---------------------------------------------------------------------------
# classification


ROW_FIELDS = ("chi_type", "lambda", "dim", "irreducible", "endo_dim",
              "weight_signature", "meataxe_seed", "elapsed_ms")


def expected_dim(shape, lam: int) -> int:
    q = shape.p ** (shape.t1 + shape.t2)
    return 2 * q if lam == 0 else 2 * (2 * lam + 1) * q


def classify_cell(alg, chi_type: str, lam: int, seed: int = 0, chi=None,
                  cache_dir: str | None = None) -> dict:
    from .kacmod import build_kac, named_character
    t0 = time.perf_counter()
    chi = chi or named_character(alg, chi_type)
    M = build_kac(alg, chi, lam, cache_dir=cache_dir)
    mseed = derived_seed(seed, "meataxe", chi_type, lam)
    cert = meataxe(M.generators(), M.parity, alg.p, mseed)
    ws = weight_spaces(M.rho_named("h"), alg.p)
    row = {
        "chi_type": chi_type,
        "lambda": lam,
        "dim": M.dim,
        "irreducible": cert.verdict == "irreducible",
        "endo_dim": cert.endo_dim,
        "weight_signature": [[w, ws[w]] for w in sorted(ws)],
        "meataxe_seed": mseed,
        "elapsed_ms": int((time.perf_counter() - t0) * 1000),
    }
    return {k: row[k] for k in ROW_FIELDS}


@dataclass
class ClassificationReport:
    shape: object
    rows: list
    hom_checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        dims_ok = all(r["dim"] == expected_dim(self.shape, r["lambda"]) for r in self.rows)
        simple = all(r["irreducible"] and r["endo_dim"] == 1 for r in self.rows)
        homs = all(h["hom_dim"] == (1 if h["lambda"] == h["mu"] else 0) for h in self.hom_checks)
        return dims_ok and simple and homs and self.distinct

    @property
    def distinct(self) -> bool:
        """Pairwise distinct dimensions inside each chi type."""
        by_type: dict = {}
        for r in self.rows:
            by_type.setdefault(r["chi_type"], []).append(r["dim"])
        return all(len(set(v)) == len(v) for v in by_type.values())

    def to_json(self) -> dict:
        return {
            "shape": {"p": self.shape.p, "t1": self.shape.t1, "t2": self.shape.t2},
            "rows": self.rows,
            "hom_checks": self.hom_checks,
            "distinct_dims": self.distinct,
            "passed": self.passed,
            "notes": self.notes,
        }

    def table(self) -> str:
        lines = ["%-8s %6s %6s %6s %5s %8s" % ("chi", "lambda", "dim", "expect", "irr", "endo")]
        for r in self.rows:
            lines.append("%-8s %6d %6d %6d %5s %8s" % (
                r["chi_type"], r["lambda"], r["dim"], expected_dim(self.shape, r["lambda"]),
                "yes" if r["irreducible"] else "no", r["endo_dim"]))
        return "\n".join(lines)


def classify(alg, chi_types, lambdas, seed: int = 0, hom_pairs=(), budget: int = HOM_BUDGET,
             workers: int = 1, cache_dir: str | None = None) -> ClassificationReport:
    """Rows in (chi type, lambda) order; hom spot checks for the given lambda pairs."""
    from .kacmod import build_kac, named_character
    cells = [(c, lam) for c in chi_types for lam in lambdas]
    if workers > 1 and len(cells) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            futs = [ex.submit(_cell_job, alg.shape, c, lam, seed, cache_dir) for c, lam in cells]
            rows = [f.result() for f in futs]
    else:
        rows = [classify_cell(alg, c, lam, seed, cache_dir=cache_dir) for c, lam in cells]
    report = ClassificationReport(alg.shape, rows)
    report.notes.append(
        "character types I, II and III are all run")
    for c in chi_types:
        chi = named_character(alg, c)
        mods = {}
        for lam, mu in hom_pairs:
            for x in (lam, mu):
                if x not in mods:
                    mods[x] = build_kac(alg, chi, x, cache_dir=cache_dir)
            A, B = mods[lam], mods[mu]
            if A.dim * B.dim > budget:
                report.hom_checks.append({"chi_type": c, "lambda": lam, "mu": mu,
                                          "hom_dim": None, "skipped": "budget"})
                continue
            d = hom_space(A.generators(), B.generators(), A.parity, B.parity, alg.p, budget)
            report.hom_checks.append({"chi_type": c, "lambda": lam, "mu": mu,
                                      "hom_dim": d["total"], "even": d["even"], "odd": d["odd"]})
    return report


def _cell_job(shape, chi_type, lam, seed, cache_dir):
    from .hamalg import algebra
    return classify_cell(algebra(shape, cache_dir), chi_type, lam, seed, cache_dir=cache_dir)
