"""Molecular graphs: SMILES subset parsing, serialization, identity and similarity.

Covers the organic subset (B, C, N, O, P, S, F, Cl, Br, I), aromatic
lowercase atoms, bracket atoms with charge, bond symbols ``- = # :``,
branches, and ring closures (``1``..``9`` and ``%nn``). Stereo markers
(``/ \\ @``) are accepted and ignored; the molecule carries a warning flag
when that happens. No valence checking, no isotopes.

Identity is skeleton-level: a Weisfeiler-Lehman style iterative
neighborhood hash plus count guards, not a full canonical SMILES.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (
    EmptyInputError,
    LengthMismatchError,
    SmilesParseError,
    UnbalancedParenError,
    UnknownAtomSymbolError,
    UnmatchedRingError,
)

SINGLE = "single"
DOUBLE = "double"
TRIPLE = "triple"
AROMATIC = "aromatic"

_BOND_SYMBOLS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC}
_BOND_CODES = {SINGLE: 1, DOUBLE: 2, TRIPLE: 3, AROMATIC: 4}

_ORGANIC_SINGLE = {"B", "C", "N", "O", "P", "S", "F", "I"}
_ORGANIC_TWO = {"Cl", "Br"}
_AROMATIC_LOWER = {"b", "c", "n", "o", "p", "s"}


class Atom(NamedTuple):
    element: str
    aromatic: bool
    charge: int
    bracketed: bool


class Bond(NamedTuple):
    a: int
    b: int
    order: str


@dataclass(frozen=True)
class Molecule:
    """Parsed molecular graph. Immutable and hashable."""

    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    smiles_source: str = ""
    stereo_ignored: bool = False

    def __post_init__(self) -> None:
        if len(self.atoms) < 1:
            raise ValueError("molecule must have at least one atom")
        seen: set[tuple[int, int]] = set()
        n = len(self.atoms)
        for bond in self.bonds:
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise ValueError(f"bond endpoint out of range: {bond}")
            if bond.a == bond.b:
                raise ValueError(f"self-bond not allowed: {bond}")
            pair = (min(bond.a, bond.b), max(bond.a, bond.b))
            if pair in seen:
                raise ValueError(f"duplicate bond between atoms {pair}")
            seen.add(pair)

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    @property
    def bond_count(self) -> int:
        return len(self.bonds)


@dataclass(frozen=True)
class Fingerprint:
    """Circular-environment bitset. ``bits`` is an integer bitmask."""

    bits: int
    n_bits: int = 2048
    radius: int = 2

    def __post_init__(self) -> None:
        if self.n_bits <= 0 or self.n_bits & (self.n_bits - 1):
            raise ValueError("n_bits must be a power of two")
        if self.bits < 0 or self.bits >> self.n_bits:
            raise ValueError("bits outside fingerprint width")

    def on_bits(self) -> frozenset[int]:
        out, bits, idx = [], self.bits, 0
        while bits:
            if bits & 1:
                out.append(idx)
            bits >>= 1
            idx += 1
        return frozenset(out)

    def bit_count(self) -> int:
        return self.bits.bit_count()


@dataclass(frozen=True)
class CanonicalKey:
    """Fixed-width graph hash, equal across SMILES spellings of one graph."""

    key: str

    def __str__(self) -> str:
        return self.key


# --- hashing ----------------------------------------------------------------


def _hash_ints(*values: int) -> int:
    return _fnv1a(b"".join(v.to_bytes(8, "big") for v in values))


def _initial_codes(m: Molecule) -> list[int]:
    return [
        _fnv1a(f"{a.element}|{int(a.aromatic)}|{a.charge}".encode())
        for a in m.atoms
    ]


def _adjacency(m: Molecule) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in m.atoms]
    for bond in m.bonds:
        code = _BOND_CODES[bond.order]
        adj[bond.a].append((bond.b, code))
        adj[bond.b].append((bond.a, code))
    return adj


def _refine(codes: list[int], adj: list[list[tuple[int, int]]]) -> list[int]:
    new_codes = []
    for i, neighbors in enumerate(adj):
        env = sorted((bond_code, codes[j]) for j, bond_code in neighbors)
        flat = [codes[i]]
        for bond_code, neighbor_code in env:
            flat.append(bond_code)
            flat.append(neighbor_code)
        new_codes.append(_hash_ints(*flat))
    return new_codes


# --- parsing ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.atoms: list[Atom] = []
        self.bonds: list[Bond] = []
        self.bond_pairs: set[tuple[int, int]] = set()
        self.prev: int | None = None
        self.stack: list[int] = []
        self.pending: str | None = None
        self.rings: dict[int, tuple[int, str | None]] = {}
        self.stereo_ignored = False

    def error_context(self) -> str:
        return f" at position {self.pos} in {self.text!r}"

    def add_bond(self, a: int, b: int, order: str) -> None:
        if a == b:
            raise UnmatchedRingError(
                "ring closure bonds an atom to itself" + self.error_context()
            )
        pair = (min(a, b), max(a, b))
        if pair in self.bond_pairs:
            raise SmilesParseError(
                f"duplicate bond between atoms {pair}" + self.error_context()
            )
        self.bond_pairs.add(pair)
        self.bonds.append(Bond(a, b, order))

    def default_order(self, a: int, b: int) -> str:
        if self.atoms[a].aromatic and self.atoms[b].aromatic:
            return AROMATIC
        return SINGLE

    def attach(self, atom: Atom) -> None:
        idx = len(self.atoms)
        self.atoms.append(atom)
        if self.prev is not None:
            order = self.pending or self.default_order(self.prev, idx)
            self.add_bond(self.prev, idx, order)
        elif self.pending is not None:
            raise SmilesParseError("bond symbol before any atom" + self.error_context())
        self.pending = None
        self.prev = idx

    def ring_closure(self, number: int) -> None:
        if self.prev is None:
            raise UnmatchedRingError(
                "ring closure before any atom" + self.error_context()
            )
        if number in self.rings:
            open_atom, open_order = self.rings.pop(number)
            if open_order and self.pending and open_order != self.pending:
                raise SmilesParseError(
                    f"conflicting bond orders on ring closure {number}"
                    + self.error_context()
                )
            order = open_order or self.pending or self.default_order(open_atom, self.prev)
            self.add_bond(open_atom, self.prev, order)
        else:
            self.rings[number] = (self.prev, self.pending)
        self.pending = None

    def parse_bracket(self) -> Atom:
        end = self.text.find("]", self.pos)
        if end < 0:
            raise UnbalancedParenError("unclosed '['" + self.error_context())
        body = self.text[self.pos + 1 : end]
        self.pos = end + 1
        if not body:
            raise UnknownAtomSymbolError("empty bracket atom")
        k = 0
        if body[k].isdigit():
            raise UnknownAtomSymbolError(
                f"isotope labels are not supported: [{body}]"
            )
        if body[k] in _AROMATIC_LOWER:
            element, aromatic = body[k].upper(), True
            k += 1
        elif body[k : k + 2] in _ORGANIC_TWO:
            element, aromatic = body[k : k + 2], False
            k += 2
        elif body[k] in _ORGANIC_SINGLE:
            element, aromatic = body[k], False
            k += 1
        else:
            raise UnknownAtomSymbolError(f"unknown atom symbol in [{body}]")
        charge = 0
        while k < len(body):
            ch = body[k]
            if ch == "@":
                self.stereo_ignored = True
                k += 1
            elif ch == "H":
                k += 1
                while k < len(body) and body[k].isdigit():
                    k += 1
            elif ch in "+-":
                sign = 1 if ch == "+" else -1
                k += 1
                if k < len(body) and body[k].isdigit():
                    start = k
                    while k < len(body) and body[k].isdigit():
                        k += 1
                    charge = sign * int(body[start:k])
                else:
                    magnitude = 1
                    while k < len(body) and body[k] == ch:
                        magnitude += 1
                        k += 1
                    charge = sign * magnitude
            else:
                raise UnknownAtomSymbolError(
                    f"unsupported bracket content {ch!r} in [{body}]"
                )
        return Atom(element, aromatic, charge, True)

    def run(self) -> Molecule:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == "(":
                if self.prev is None:
                    raise UnbalancedParenError(
                        "branch opened before any atom" + self.error_context()
                    )
                self.stack.append(self.prev)
                self.pos += 1
            elif ch == ")":
                if not self.stack:
                    raise UnbalancedParenError("unmatched ')'" + self.error_context())
                if self.pending is not None:
                    raise SmilesParseError(
                        "dangling bond before ')'" + self.error_context()
                    )
                self.prev = self.stack.pop()
                self.pos += 1
            elif ch in _BOND_SYMBOLS:
                if self.pending is not None:
                    raise SmilesParseError(
                        "two bond symbols in a row" + self.error_context()
                    )
                self.pending = _BOND_SYMBOLS[ch]
                self.pos += 1
            elif ch in "/\\":
                self.stereo_ignored = True
                if self.pending is None:
                    self.pending = SINGLE
                self.pos += 1
            elif ch.isdigit():
                self.ring_closure(int(ch))
                self.pos += 1
            elif ch == "%":
                digits = text[self.pos + 1 : self.pos + 3]
                if len(digits) != 2 or not digits.isdigit():
                    raise UnmatchedRingError(
                        "'%' must be followed by two digits" + self.error_context()
                    )
                self.ring_closure(int(digits))
                self.pos += 3
            elif ch == "[":
                self.attach(self.parse_bracket())
            elif ch == "@":
                self.stereo_ignored = True
                self.pos += 1
            elif ch.isalpha():
                two = text[self.pos : self.pos + 2]
                if two in _ORGANIC_TWO:
                    self.attach(Atom(two, False, 0, False))
                    self.pos += 2
                elif ch in _ORGANIC_SINGLE:
                    self.attach(Atom(ch, False, 0, False))
                    self.pos += 1
                elif ch in _AROMATIC_LOWER:
                    self.attach(Atom(ch.upper(), True, 0, False))
                    self.pos += 1
                else:
                    raise UnknownAtomSymbolError(
                        f"unknown atom symbol {ch!r}" + self.error_context()
                    )
            else:
                raise UnknownAtomSymbolError(
                    f"unexpected character {ch!r}" + self.error_context()
                )
        if self.pending is not None:
            raise SmilesParseError(f"dangling bond at end of {text!r}")
        if self.stack:
            raise UnbalancedParenError(f"{len(self.stack)} unclosed '(' in {text!r}")
        if self.rings:
            numbers = ", ".join(str(n) for n in sorted(self.rings))
            raise UnmatchedRingError(f"unclosed ring closure(s) {numbers} in {text!r}")
        return Molecule(
            atoms=tuple(self.atoms),
            bonds=tuple(self.bonds),
            smiles_source=text,
            stereo_ignored=self.stereo_ignored,
        )


def parse_smiles(text: str) -> Molecule:
    """Parse a SMILES string (organic subset) into a molecular graph.

    Raises EmptyInputError, UnmatchedRingError, UnbalancedParenError or
    UnknownAtomSymbolError on malformed input.
    """
    if text is None or not text.strip():
        raise EmptyInputError("empty SMILES input")
    return _Parser(text.strip()).run()


# --- writing ----------------------------------------------------------------


def _atom_token(atom: Atom) -> str:
    symbol = atom.element.lower() if atom.aromatic else atom.element
    if atom.charge == 0:
        return symbol
    if atom.charge == 1:
        suffix = "+"
    elif atom.charge == -1:
        suffix = "-"
    elif atom.charge > 0:
        suffix = f"+{atom.charge}"
    else:
        suffix = f"-{-atom.charge}"
    return f"[{symbol}{suffix}]"


def _bond_token(order: str, a: Atom, b: Atom) -> str:
    if order == SINGLE:
        return "-" if (a.aromatic and b.aromatic) else ""
    if order == AROMATIC:
        return "" if (a.aromatic and b.aromatic) else ":"
    if order == DOUBLE:
        return "="
    return "#"


def _ring_token(number: int) -> str:
    return str(number) if number < 10 else f"%{number:02d}"


def write_smiles(m: Molecule) -> str:
    """Serialize a molecular graph; the output reparses to an isomorphic graph."""
    n = len(m.atoms)
    adj: list[list[tuple[int, str]]] = [[] for _ in range(n)]
    for bond in m.bonds:
        adj[bond.a].append((bond.b, bond.order))
        adj[bond.b].append((bond.a, bond.order))

    visited = [False] * n
    children: list[list[tuple[int, str]]] = [[] for _ in range(n)]
    back_edges: list[list[tuple[int, int, str]]] = [[] for _ in range(n)]
    edge_seen: set[tuple[int, int]] = set()
    edge_count = 0
    visited[0] = True
    # Iterative depth-first walk building the spanning tree and back-edge lists.
    walk: list[tuple[int, object]] = [(0, iter(adj[0]))]
    while walk:
        node, neighbor_iter = walk[-1]
        descended = False
        for neighbor, bond_order in neighbor_iter:
            pair = (min(node, neighbor), max(node, neighbor))
            if pair in edge_seen:
                continue
            edge_seen.add(pair)
            if not visited[neighbor]:
                visited[neighbor] = True
                children[node].append((neighbor, bond_order))
                walk.append((neighbor, iter(adj[neighbor])))
                descended = True
                break
            edge_count += 1
            back_edges[node].append((edge_count, neighbor, bond_order))
            back_edges[neighbor].append((edge_count, node, bond_order))
        if not descended:
            walk.pop()
    if not all(visited):
        raise ValueError("disconnected molecule cannot be serialized")

    ring_numbers: dict[int, int] = {}
    free_numbers: list[int] = []
    next_number = [1]

    def claim_number(edge_id: int) -> int:
        if free_numbers:
            number = free_numbers.pop()
        else:
            number = next_number[0]
            next_number[0] += 1
            if number > 99:
                raise ValueError("too many simultaneous ring closures")
        ring_numbers[edge_id] = number
        return number

    pieces: list[str] = []

    def emit(node: int, parent: int) -> None:
        pieces.append(_atom_token(m.atoms[node]))
        for edge_id, other, bond_order in back_edges[node]:
            if edge_id not in ring_numbers:
                number = claim_number(edge_id)
                pieces.append(
                    _bond_token(bond_order, m.atoms[node], m.atoms[other])
                    + _ring_token(number)
                )
            else:
                number = ring_numbers.pop(edge_id)
                pieces.append(_ring_token(number))
                free_numbers.append(number)
        kids = children[node]
        for position, (child, bond_order) in enumerate(kids):
            token = _bond_token(bond_order, m.atoms[node], m.atoms[child])
            if position < len(kids) - 1:
                pieces.append("(" + token)
                emit(child, node)
                pieces.append(")")
            else:
                pieces.append(token)
                emit(child, node)

    emit(0, -1)
    return "".join(pieces)


# --- identity and similarity -------------------------------------------------


@functools.lru_cache(maxsize=8192)
def canonical_key(m: Molecule, iterations: int = 8) -> CanonicalKey:
    """Graph hash invariant to SMILES spelling and atom input order."""
    codes = _initial_codes(m)
    adj = _adjacency(m)
    for _ in range(iterations):
        codes = _refine(codes, adj)
    digest = _hash_ints(len(m.atoms), len(m.bonds), *sorted(codes))
    return CanonicalKey(key=f"{digest:016x}")


@functools.lru_cache(maxsize=8192)
def fingerprint(m: Molecule, radius: int = 2, n_bits: int = 2048) -> Fingerprint:
    """Circular environment fingerprint; one bit per environment hash."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if n_bits <= 0 or n_bits & (n_bits - 1):
        raise ValueError("n_bits must be a power of two")
    codes = _initial_codes(m)
    adj = _adjacency(m)
    bits = 0
    for code in codes:
        bits |= 1 << (code % n_bits)
    for _ in range(radius):
        codes = _refine(codes, adj)
        for code in codes:
            bits |= 1 << (code % n_bits)
    return Fingerprint(bits=bits, n_bits=n_bits, radius=radius)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|A is in B| / |A union B| over set bits; 1.0 when both are empty."""
    if a.n_bits != b.n_bits:
        raise LengthMismatchError(
            f"fingerprint lengths differ: {a.n_bits} vs {b.n_bits}"
        )
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union


def element_multiset(m: Molecule) -> Counter:
    return Counter(atom.element for atom in m.atoms)


def same_molecule(a: Molecule, b: Molecule) -> bool:
    """Skeleton-level structural identity (hash plus count guards)."""
    if a.atom_count != b.atom_count or a.bond_count != b.bond_count:
        return False
    if element_multiset(a) != element_multiset(b):
        return False
    return canonical_key(a) == canonical_key(b)


def molecule_similarity(a: Molecule, b: Molecule) -> float:
    """Tanimoto similarity of the default fingerprints of two molecules."""
    return tanimoto(fingerprint(a), fingerprint(b))
