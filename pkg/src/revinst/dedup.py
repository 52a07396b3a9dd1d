"""Near-duplicate elimination: MinHash signatures over character shingles and
a prefix-tree forest index for top-k candidate retrieval, plus the exact
Jaccard brute force used as the testing oracle.

Single streaming pass in input order, keep-first: a record is dropped iff an
earlier retained record is returned by the index and the estimated Jaccard
reaches the threshold.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .records import InstructionRecord

DEFAULT_SHINGLE_K = 5
DEFAULT_NUM_PERM = 128
DEFAULT_THRESHOLD = 0.85
DEFAULT_TOP_K = 16


def _normalize(text: str) -> str:
    return " ".join(text.lower().split())


def _hash64(data: str) -> int:
    return int.from_bytes(hashlib.blake2b(data.encode("utf-8"), digest_size=8).digest(),
                          "little")


@dataclass(frozen=True)
class ShingleSet:
    """Character k-gram hashes of normalized (lowercased, space-collapsed) text.
    Texts shorter than k contribute the single whole-text shingle."""

    k: int
    shingles: frozenset[int]

    @classmethod
    def from_text(cls, text: str, k: int = DEFAULT_SHINGLE_K) -> "ShingleSet":
        norm = _normalize(text)
        if len(norm) < k:
            grams: Iterable[str] = (norm,)
        else:
            grams = (norm[i:i + k] for i in range(len(norm) - k + 1))
        return cls(k, frozenset(_hash64(g) for g in grams))


def exact_jaccard(a: ShingleSet, b: ShingleSet) -> float:
    """Brute-force set Jaccard; the independent oracle for the estimator."""
    if a.k != b.k:
        raise ValueError("shingle sets use different k")
    union = len(a.shingles | b.shingles)
    if union == 0:
        return 1.0
    return len(a.shingles & b.shingles) / union


class _PermTable:
    """Per-permutation odd multipliers and offsets (multiply-shift family),
    derived deterministically from the permutation seed."""

    _cache: dict[tuple[int, int], "_PermTable"] = {}

    def __init__(self, num_perm: int, perm_seed: int):
        rng = random.Random(perm_seed)
        self.mul = np.array([rng.getrandbits(64) | 1 for _ in range(num_perm)],
                            dtype=np.uint64)
        self.add = np.array([rng.getrandbits(64) for _ in range(num_perm)],
                            dtype=np.uint64)

    @classmethod
    def get(cls, num_perm: int, perm_seed: int) -> "_PermTable":
        key = (num_perm, perm_seed)
        if key not in cls._cache:
            cls._cache[key] = cls(num_perm, perm_seed)
        return cls._cache[key]


@dataclass(frozen=True)
class MinHashSignature:
    num_perm: int
    perm_seed: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.num_perm:
            raise ValueError("signature length must equal num_perm")


def minhash(text: str, k: int = DEFAULT_SHINGLE_K, num_perm: int = DEFAULT_NUM_PERM,
            perm_seed: int = 0) -> MinHashSignature:
    if not text:
        raise ValueError("minhash: text must be nonempty")
    return minhash_from_shingles(ShingleSet.from_text(text, k), num_perm, perm_seed)


def minhash_from_shingles(shingles: ShingleSet, num_perm: int = DEFAULT_NUM_PERM,
                          perm_seed: int = 0) -> MinHashSignature:
    table = _PermTable.get(num_perm, perm_seed)
    x = np.fromiter(shingles.shingles, dtype=np.uint64,
                    count=len(shingles.shingles)).reshape(-1, 1)
    # uint64 arithmetic wraps mod 2^64, which is exactly the hash family here.
    vals = (x + table.add.reshape(1, -1)) * table.mul.reshape(1, -1)
    return MinHashSignature(num_perm, perm_seed, tuple(int(v) for v in vals.min(axis=0)))


def estimate_jaccard(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of matching signature slots."""
    if a.num_perm != b.num_perm or a.perm_seed != b.perm_seed:
        raise ValueError("signatures are not comparable: num_perm/perm_seed differ")
    matches = sum(1 for x, y in zip(a.values, b.values) if x == y)
    return matches / a.num_perm


class LshForestIndex:
    """Prefix-tree index over signature value prefixes.

    The signature is cut into ``num_trees`` fixed-length keys; every key
    prefix length is indexed so a query can walk from the deepest (most
    similar) prefix outward until ``top_k`` candidates are collected.
    """

    def __init__(self, num_perm: int = DEFAULT_NUM_PERM, num_trees: int = 8):
        if num_perm % num_trees != 0:
            raise ValueError("num_perm must be divisible by num_trees")
        self.num_perm = num_perm
        self.num_trees = num_trees
        self.depth = num_perm // num_trees
        # One dict per (tree, prefix_length): prefix tuple -> ids in insertion order.
        self._levels: list[list[dict[tuple[int, ...], list[str]]]] = [
            [dict() for _ in range(self.depth)] for _ in range(num_trees)
        ]
        self._signatures: dict[str, MinHashSignature] = {}

    def __len__(self) -> int:
        return len(self._signatures)

    def __contains__(self, record_id: str) -> bool:
        return record_id in self._signatures

    def _keys(self, sig: MinHashSignature) -> list[tuple[int, ...]]:
        return [tuple(sig.values[t * self.depth:(t + 1) * self.depth])
                for t in range(self.num_trees)]

    def insert(self, record_id: str, sig: MinHashSignature) -> None:
        if sig.num_perm != self.num_perm:
            raise ValueError("signature num_perm does not match index")
        if record_id in self._signatures:
            raise ValueError(f"duplicate id in index: {record_id}")
        self._signatures[record_id] = sig
        for tree, key in enumerate(self._keys(sig)):
            for depth in range(1, self.depth + 1):
                self._levels[tree][depth - 1].setdefault(key[:depth], []).append(record_id)

    def signature(self, record_id: str) -> MinHashSignature:
        return self._signatures[record_id]

    def query(self, sig: MinHashSignature, top_k: int = DEFAULT_TOP_K) -> list[str]:
        """Up to top_k candidate ids, deepest shared prefix first; ties keep
        insertion order. An inserted id is always its own top-1."""
        if sig.num_perm != self.num_perm:
            raise ValueError("signature num_perm does not match index")
        keys = self._keys(sig)
        out: list[str] = []
        seen: set[str] = set()
        for depth in range(self.depth, 0, -1):
            for tree in range(self.num_trees):
                bucket = self._levels[tree][depth - 1].get(keys[tree][:depth])
                if not bucket:
                    continue
                for record_id in bucket:
                    if record_id not in seen:
                        seen.add(record_id)
                        out.append(record_id)
                        if len(out) >= top_k:
                            return out
        return out


def record_dedup_text(rec: InstructionRecord) -> str:
    """The deduplication domain: the English pair when the trace has it,
    otherwise the raw instruction-output pair."""
    if rec.trace.inst_en and rec.trace.doc_en:
        return f"{rec.trace.inst_en}\n{rec.trace.doc_en}"
    return f"{rec.instruction}\n{rec.output}"


@dataclass(frozen=True)
class DropPair:
    kept_id: str
    dropped_id: str
    estimate: float


@dataclass(frozen=True)
class DedupParams:
    threshold: float = DEFAULT_THRESHOLD
    top_k: int = DEFAULT_TOP_K
    shingle_k: int = DEFAULT_SHINGLE_K
    num_perm: int = DEFAULT_NUM_PERM
    perm_seed: int = 0
    num_trees: int = 8


def deduplicate(records: Sequence[InstructionRecord],
                params: DedupParams = DedupParams()) -> tuple[list[InstructionRecord], list[DropPair]]:
    """Keep-first streaming dedup; returns (retained, dropped pairs)."""
    index = LshForestIndex(params.num_perm, params.num_trees)
    retained: list[InstructionRecord] = []
    dropped: list[DropPair] = []
    for rec in records:
        sig = minhash(record_dedup_text(rec), params.shingle_k, params.num_perm,
                      params.perm_seed)
        best_id, best_est = None, 0.0
        for cand_id in index.query(sig, params.top_k):
            est = estimate_jaccard(sig, index.signature(cand_id))
            if est > best_est:
                best_id, best_est = cand_id, est
        if best_id is not None and best_est >= params.threshold:
            dropped.append(DropPair(best_id, rec.id, best_est))
            continue
        index.insert(rec.id, sig)
        retained.append(rec)
    return retained, dropped
