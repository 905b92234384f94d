"""Height-0 characters and Kac modules K_chi(lam) = U_chi(g) (x)_{u(g_0)} L0(lam).

Basis vectors are D1^a D2^b D3^c (x) v_{lam,k,l}, indexed by
((a * p^t2 + b) * 2 + c) * dim L0 + (index of (k, l) in L0).
The action of a basis element x of g is worked out by normal ordering:
letters multiply on the left (with D1^{p^t1} -> chi(D1)^{p^t1}, likewise D2),
and any other x is pushed through the leading letter using
x D = (-1)^{|x||D|} D x + [x, D].
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .dpsuper import Mono
from .gfp import MatrixGF, matpow
from .hamalg import LETTERS, X1, X1X2, X2, XI, GRStructure, HamAlgebra, HamElement, grade
from .l0rep import L0Module, basis_action, build_l0

log = logging.getLogger(__name__)

CACHE_VERSION = 1
TYPES = ("I", "II", "III")
LETTER_PARITY = {1: 0, 2: 0, 3: 1}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class Character:
    """chi on the even canonical basis (chi vanishes on the odd part)."""

    values: tuple  # sorted ((monomial, value), ...) with nonzero values
    p: int
    tag: str = "custom"

    @classmethod
    def make(cls, values: dict, p: int, tag: str = "custom") -> "Character":
        clean = []
        for m, v in values.items():
            if m[2] == 1:
                raise ConfigError("chi must vanish on odd elements, got %s" % (m,))
            if v % p:
                clean.append((tuple(m), v % p))
        return cls(tuple(sorted(clean)), p, tag)

    def __call__(self, m: Mono) -> int:
        return dict(self.values).get(tuple(m), 0)

    @property
    def d1(self) -> int:
        return -self(X2) % self.p

    @property
    def d2(self) -> int:
        return self(X1) % self.p

    def as_json(self) -> dict:
        return {"tag": self.tag,
                "values": [[list(m), v] for m, v in self.values]}


def named_character(alg: HamAlgebra, name: str) -> Character:
    """Types I, II, III, '0' (the zero character) or 'custom:key=val,...'."""
    p = alg.p
    if name == "I":
        return Character.make({X1: 1, X2: -1}, p, "I")
    if name == "II":
        return Character.make({X2: -1}, p, "II")
    if name == "III":
        return Character.make({X1: 1}, p, "III")
    if name == "0":
        return Character.make({}, p, "0")
    if name.startswith("custom:"):
        return parse_custom(alg, name[len("custom:"):])
    raise ConfigError("unknown character %r" % name)


_KEY = re.compile(r"^x(\d+)_(\d+)$")


def parse_custom(alg: HamAlgebra, text: str) -> Character:
    """Keys: D1, D2 (letters), h, e, f (osp), or x<i1>_<i2> for D_H(x1^(i1) x2^(i2))."""
    p = alg.p
    values: dict = {}
    named = {"h": (X1X2, 1), "e": ((0, 2, 0), -1), "f": ((2, 0, 0), 1),
             "D1": (X2, -1), "D2": (X1, 1)}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise ConfigError("bad custom chi entry %r" % item)
        key, val = (s.strip() for s in item.split("=", 1))
        try:
            val = int(val)
        except ValueError:
            raise ConfigError("chi value must be an integer: %r" % item) from None
        if key in named:
            m, s = named[key]
        elif _KEY.match(key):
            i1, i2 = map(int, _KEY.match(key).groups())
            m, s = (i1, i2, 0), 1
        else:
            raise ConfigError("unknown chi key %r" % key)
        if m not in alg.index:
            raise ConfigError("%s is not a basis element for %s" % (key, alg.shape))
        # chi(s * e_m) = val
        values[m] = values.get(m, 0) + val * s
    return Character.make(values, p, "custom:" + text)


def height(chi: Character, alg: HamAlgebra) -> int:
    """Least i >= -1 with chi vanishing on the filtration piece of grade >= i."""
    grades = [grade(m) for m, _ in chi.values]
    return max(grades) + 1 if grades else -1


# ---------------------------------------------------------------------------
# Kac module


class KacModule:
    def __init__(self, alg: HamAlgebra, chi: Character, lam: int,
                 peel=(1, 2, 3), memo: bool = True):
        if chi.p != alg.p:
            raise ConfigError("character and algebra live over different fields")
        if height(chi, alg) != 0:
            log.warning("chi has height %d; the Kac module is built without claims",
                        height(chi, alg))
        self.alg, self.chi, self.p = alg, chi, alg.p
        self.lam = int(lam) % alg.p
        self.L0: L0Module = build_l0(self.lam, self.p)
        self.d0 = self.L0.dim
        sh = alg.shape
        self.n1, self.n2 = sh.n1, sh.n2
        self.n_mono = self.n1 * self.n2 * 2
        self.dim = self.n_mono * self.d0
        self.peel = tuple(peel)
        self.memo = memo
        self._memo: dict = {}
        self._rho: dict[int, MatrixGF] = {}
        self._l0 = basis_action(self.L0, alg)
        self._letter_idx = {k: alg.index[m] for k, (m, _) in LETTERS.items()}
        self._letter_sign = {k: s for k, (_, s) in LETTERS.items()}
        self._letter_of = {i: k for k, i in self._letter_idx.items()}
        p = self.p
        # overflow scalars chi(D_k)^{p^{t_k}}, by explicit exponentiation
        self._overflow = {1: pow(chi.d1, self.n1, p), 2: pow(chi.d2, self.n2, p)}
        self.parity = np.array(
            [(c + l) % 2 for a in range(self.n1) for b in range(self.n2)
             for c in (0, 1) for _, l in self.L0.basis], dtype=np.int64)

    # indexing ------------------------------------------------------------

    def mono_index(self, a: int, b: int, c: int) -> int:
        return (a * self.n2 + b) * 2 + c

    def index(self, a: int, b: int, c: int, k: int = 0, l: int = 0) -> int:
        return self.mono_index(a, b, c) * self.d0 + self.L0.basis.index((k, l))

    def vector(self, a: int, b: int, c: int, k: int = 0, l: int = 0, coeff: int = 1) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.index(a, b, c, k, l)] = coeff % self.p
        return v

    def basis_label(self, i: int) -> tuple:
        mi, li = divmod(i, self.d0)
        ab, c = divmod(mi, 2)
        a, b = divmod(ab, self.n2)
        k, l = self.L0.basis[li]
        return (a, b, c, k, l)

    def weight(self, i: int) -> int:
        a, b, c, k, l = self.basis_label(i)
        wt = (self.lam - 2 * k - l) if self.lam else 0
        return (wt + a - b) % self.p

    # normal ordering ---------------------------------------------------------

    def lmul(self, k: int, mono: tuple) -> tuple[tuple, int] | None:
        """D_k * D1^a D2^b D3^c as (monomial, scalar), or None for zero."""
        a, b, c = mono
        if k == 1:
            if a + 1 < self.n1:
                return (a + 1, b, c), 1
            s = self._overflow[1]
            return ((0, b, c), s) if s else None
        if k == 2:
            if b + 1 < self.n2:
                return (a, b + 1, c), 1
            s = self._overflow[2]
            return ((a, 0, c), s) if s else None
        return ((a, b, 1), 1) if c == 0 else None

    def act_mono(self, x: int, mono: tuple) -> dict:
        """x * (D^mono (x) -) as {monomial: d0 x d0 matrix}."""
        key = (x, mono)
        if self.memo and key in self._memo:
            return self._memo[key]
        out = self._act(x, mono)
        if self.memo:
            self._memo[key] = out
        return out

    def _act(self, x: int, mono: tuple) -> dict:
        alg, p = self.alg, self.p
        g = int(alg.grades[x])
        eye = np.eye(self.d0, dtype=np.int64)
        if g == -1:
            k = self._letter_of[x]
            r = self.lmul(k, mono)
            if r is None:
                return {}
            m, s = r
            return {m: eye * (s * self._letter_sign[k] % p) % p}
        if mono == (0, 0, 0):
            if g == 0:
                return {mono: self._l0[x]}
            return {}
        for k in self.peel:
            if mono[k - 1]:
                break
        rest = list(mono)
        rest[k - 1] -= 1
        rest = tuple(rest)
        out: dict = {}
        sign = -1 if (alg.parity[x] and LETTER_PARITY[k]) else 1
        for m, A in self.act_mono(x, rest).items():
            r = self.lmul(k, m)
            if r is not None:
                _acc(out, r[0], A * (sign * r[1]), p)
        # [x, D_k] = s_k [x, e_{L_k}] lies in strictly lower grade
        sk = self._letter_sign[k]
        for z, c in alg.bracket_idx(x, self._letter_idx[k]).items():
            assert alg.grades[z] < g, "grade did not drop"
            for m, A in self.act_mono(z, rest).items():
                _acc(out, m, A * (c * sk), p)
        return {m: A for m, A in out.items() if A.any()}

    # action matrices -------------------------------------------------------

    def rho(self, x: int) -> MatrixGF:
        if x not in self._rho:
            self._rho[x] = self._build_rho(x)
        return self._rho[x]

    def _build_rho(self, x: int) -> MatrixGF:
        d0 = self.d0
        rows, cols, vals = [], [], []
        blk_r, blk_c = np.divmod(np.arange(d0 * d0), d0)
        for a in range(self.n1):
            for b in range(self.n2):
                for c in (0, 1):
                    src = self.mono_index(a, b, c)
                    for m, A in self.act_mono(x, (a, b, c)).items():
                        dst = self.mono_index(*m)
                        flat = A.ravel()
                        nz = np.flatnonzero(flat)
                        rows.append(dst * d0 + blk_r[nz])
                        cols.append(src * d0 + blk_c[nz])
                        vals.append(flat[nz])
        if not rows:
            return MatrixGF.zeros(self.dim, self.dim, self.p)
        m = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(self.dim, self.dim))
        return MatrixGF(m.tocsr(), self.p)

    def build_all(self):
        for x in range(self.alg.dim):
            self.rho(x)
        self._memo.clear()
        return self

    def rho_elem(self, y: HamElement) -> MatrixGF:
        M = MatrixGF.zeros(self.dim, self.dim, self.p)
        for m, c in y.coeffs.items():
            M = M + self.rho(self.alg.index[m]).scale(c)
        return M

    def rho_named(self, name: str) -> MatrixGF:
        from .hamalg import osp_generators
        if name in ("D1", "D2", "D3"):
            k = int(name[1])
            return self.rho(self._letter_idx[k]).scale(self._letter_sign[k])
        return self.rho_elem(osp_generators(self.alg)[name])

    def generator_indices(self) -> list[int]:
        """Letters and osp generators first (they cut intertwiner systems
        down fastest), then a Lie generating set of g."""
        alg = self.alg
        first = [alg.index[m] for m in (X1X2, (0, 2, 0), (0, 1, 1), X1, X2, XI, (2, 0, 0), (1, 0, 1))]
        return first + [i for i in alg.lie_generators if i not in first]

    def generators(self) -> list[MatrixGF]:
        return [self.rho(i) for i in self.generator_indices()]

    # cache -------------------------------------------------------------------

    def payload(self) -> dict:
        sh = self.alg.shape
        return {
            "version": CACHE_VERSION,
            "p": sh.p, "t1": sh.t1, "t2": sh.t2,
            "chi": self.chi.as_json(),
            "lambda": self.lam,
            "dim": self.dim,
            "actions": [[x, [list(t) for t in self.rho(x).triplets()]]
                        for x in range(self.alg.dim)],
        }


def _acc(out: dict, m, A, p):
    if m in out:
        out[m] = (out[m] + A) % p
    else:
        out[m] = A % p


def _cache_file(M: KacModule, cache_dir: str) -> str:
    sh = M.alg.shape
    tag = hashlib.sha256(json.dumps(M.chi.as_json(), sort_keys=True).encode()).hexdigest()[:12]
    return os.path.join(cache_dir, "kac_p%d_t%d_%d_chi%s_lam%d.json" % (
        sh.p, sh.t1, sh.t2, tag, M.lam))


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def _load(M: KacModule, cache_dir: str) -> bool:
    path = _cache_file(M, cache_dir)
    if not os.path.exists(path):
        return False
    try:
        with open(path) as fh:
            doc = json.load(fh)
        body = doc["payload"]
        if doc.get("checksum") != _digest(body):
            raise ValueError("checksum mismatch")
        sh = M.alg.shape
        if (body["version"], body["p"], body["t1"], body["t2"], body["lambda"], body["dim"]) != (
                CACHE_VERSION, sh.p, sh.t1, sh.t2, M.lam, M.dim) or body["chi"] != M.chi.as_json():
            raise ValueError("header mismatch")
        for x, trip in body["actions"]:
            M._rho[int(x)] = MatrixGF.from_triplets(M.dim, M.dim, [tuple(t) for t in trip], M.p)
        if len(M._rho) != M.alg.dim:
            raise ValueError("missing action matrices")
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        log.warning("ignoring Kac cache %s: %s", path, exc)
        M._rho.clear()
        return False
    return True


def _store(M: KacModule, cache_dir: str):
    os.makedirs(cache_dir, exist_ok=True)
    body = M.payload()
    path = _cache_file(M, cache_dir)
    tmp = path + ".tmp%d" % os.getpid()
    with open(tmp, "w") as fh:
        json.dump({"payload": body, "checksum": _digest(body)}, fh)
    os.replace(tmp, path)


def build_kac(alg: HamAlgebra, chi: Character, lam: int, cache_dir: str | None = None,
              peel=(1, 2, 3), memo: bool = True) -> KacModule:
    """K_chi(lam) with the action matrix of every canonical basis element built."""
    M = KacModule(alg, chi, lam, peel=peel, memo=memo)
    if cache_dir and _load(M, cache_dir):
        return M
    M.build_all()
    if cache_dir:
        _store(M, cache_dir)
    return M


# ---------------------------------------------------------------------------
# verification


def _supercommutator(A: MatrixGF, B: MatrixGF, sign: int) -> MatrixGF:
    AB, BA = A @ B, B @ A
    return AB - BA if sign > 0 else AB + BA


def verify_module_law(M: KacModule, mode: str = "full", samples: int = 200,
                      seed: int = 0) -> dict:
    """rho([x,y]) = rho(x)rho(y) - (-1)^{|x||y|} rho(y)rho(x) on basis pairs."""
    alg = M.alg
    n = alg.dim
    if mode == "full":
        pairs = [(a, b) for a in range(n) for b in range(n)]
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        pairs = [tuple(int(v) for v in rng.integers(0, n, size=2)) for _ in range(samples)]
    else:
        raise ConfigError("mode must be full or sampled")
    checked = 0
    for a, b in pairs:
        checked += 1
        lhs = M.rho_elem(alg.elem(_bracket_vec(alg, a, b)))
        sign = -1 if (alg.parity[a] and alg.parity[b]) else 1
        rhs = _supercommutator(M.rho(a), M.rho(b), sign)
        if lhs != rhs:
            diff = (lhs - rhs).to_csr().tocoo()
            col = int(diff.col.min())
            return {"passed": False, "mode": mode, "checked": checked,
                    "witness": {"x": list(alg.basis[a]), "y": list(alg.basis[b]),
                                "vector": list(M.basis_label(col))}}
    return {"passed": True, "mode": mode, "checked": checked, "witness": None}


def _bracket_vec(alg, a, b):
    v = np.zeros(alg.dim, dtype=np.int64)
    for k, c in alg.bracket_idx(a, b).items():
        v[k] = c
    return v


def verify_chi_reduced(M: KacModule, gr: GRStructure, chi: Character | None = None) -> dict:
    """e^{p^s} - e^{phi} acts as chi(e)^{p^s} on even e; x^2 = [x,x]/2 on odd x."""
    chi = chi or M.chi
    alg, p = M.alg, M.p
    eye = MatrixGF.identity(M.dim, p)
    failures = []
    for m in gr.even_basis:
        q = gr.p_power(m)
        lhs = matpow(M.rho(alg.index[m]), q) - M.rho_elem(gr.phi[m])
        if lhs != eye.scale(pow(chi(m), q, p)):
            failures.append(list(m))
    half = pow(2, -1, p)
    odd_failures = []
    for x in alg.odd:
        R = M.rho(x)
        rhs = M.rho_elem(alg.elem(_bracket_vec(alg, x, x))).scale(half)
        if R @ R != rhs:
            odd_failures.append(list(alg.basis[x]))
    return {"passed": not failures and not odd_failures, "phi_source": gr.source,
            "even_checked": len(gr.even_basis), "odd_checked": len(alg.odd),
            "failures": failures, "odd_failures": odd_failures}


def corrupted(M: KacModule, x: int | None = None, seed: int = 0) -> KacModule:
    """Copy of M with a single action entry changed (negative control)."""
    rng = np.random.default_rng(seed)
    C = KacModule(M.alg, M.chi, M.lam, M.peel)
    C._rho = dict(M._rho)
    x = M.generator_indices()[0] if x is None else x
    A = M.rho(x).to_dense()
    i, j = (int(v) for v in rng.integers(0, M.dim, size=2))
    A[i, j] = (A[i, j] + 1) % M.p
    C._rho[x] = MatrixGF(A, M.p)
    C.corruption = {"x": x, "entry": [i, j]}
    return C
