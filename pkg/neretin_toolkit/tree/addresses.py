"""
Vertices, leaf sets and clopen sets of the quasi-regular rooted tree T_{d,k}.

The root has k children and every other vertex has d children.  A vertex is
an ``Address``: a first symbol in {0, ..., k-1} followed by a word over
{0, ..., d-1}.  Addresses order lexicographically with a prefix before its
extensions, which is the canonical order everywhere in the toolkit.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..config import config
from ..exceptions import (
    CodecError, DepthLimit, EmptyClopen, InvalidAddress, InvalidLeafSet, InvalidSignature,
    LeafNotPresent, SignatureMismatch,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Signature:
    """The pair (d, k); k = 1 is only allowed for relabelled rigid stabilizers."""

    d: int
    k: int
    non_standard: bool = False

    def __post_init__(self):
        if self.d < 2:
            raise InvalidSignature(f"Branching degree d must be at least 2, got {self.d}")
        if self.k < 1 or (self.k == 1 and not self.non_standard):
            raise InvalidSignature(f"Root degree k must be at least 2, got {self.k}")
        if self.k >= 2 and self.non_standard:
            object.__setattr__(self, 'non_standard', False)

    @classmethod
    def parse(cls, text: str) -> 'Signature':
        """Parse "d,k"."""
        try:
            d, k = (int(part) for part in text.split(','))
        except ValueError as e:
            raise CodecError(f"Signature must look like 'd,k', got {text!r}") from e
        return cls(d, k)

    def arity(self, depth: int) -> int:
        """Number of children of a vertex at the given depth."""
        return self.k if depth == 0 else self.d

    def to_list(self) -> List[int]:
        return [self.d, self.k]

    def __str__(self) -> str:
        return f"T_{{{self.d},{self.k}}}"


@dataclass(frozen=True, order=True)
class Address:
    """A vertex of T_{d,k}; the empty tuple is the root."""

    symbols: Tuple[int, ...] = ()

    @classmethod
    def root(cls) -> 'Address':
        return cls(())

    @classmethod
    def of(cls, *symbols: int) -> 'Address':
        return cls(tuple(symbols))

    @classmethod
    def parse(cls, text: str) -> 'Address':
        """Digits ("010") or comma separated integers ("10,3,2")."""
        text = text.strip()
        if text in ('', 'ε'):
            return cls.root()
        try:
            if ',' in text:
                body = text[:-1] if text.endswith(',') else text
                symbols = tuple(int(part) for part in body.split(','))
            else:
                symbols = tuple(int(ch) for ch in text)
        except ValueError as e:
            raise CodecError(f"Malformed address: {text!r}") from e
        if any(s < 0 for s in symbols):
            raise CodecError(f"Negative symbol in address {text!r}")
        return cls(symbols)

    @property
    def depth(self) -> int:
        return len(self.symbols)

    @property
    def first(self) -> int:
        if not self.symbols:
            raise InvalidAddress("The root has no first symbol")
        return self.symbols[0]

    @property
    def tail(self) -> Tuple[int, ...]:
        return self.symbols[1:]

    def is_root(self) -> bool:
        return not self.symbols

    def child(self, symbol: int) -> 'Address':
        return Address(self.symbols + (symbol,))

    def extend(self, word: Sequence[int]) -> 'Address':
        return Address(self.symbols + tuple(word))

    @property
    def parent(self) -> 'Address':
        if not self.symbols:
            raise InvalidAddress("The root has no parent")
        return Address(self.symbols[:-1])

    def prefix(self, length: int) -> 'Address':
        return Address(self.symbols[:length])

    def suffix_after(self, prefix: 'Address') -> Tuple[int, ...]:
        """The word w with self = prefix·w."""
        if not prefix.is_prefix_of(self):
            raise InvalidAddress(f"{prefix.to_text()!r} is not a prefix of {self.to_text()!r}")
        return self.symbols[prefix.depth:]

    def is_prefix_of(self, other: 'Address') -> bool:
        """Prefix or equal."""
        return other.symbols[:len(self.symbols)] == self.symbols

    def is_proper_prefix_of(self, other: 'Address') -> bool:
        return len(self.symbols) < len(other.symbols) and self.is_prefix_of(other)

    def comparable(self, other: 'Address') -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def is_wide(self) -> bool:
        return any(s > 9 for s in self.symbols)

    def to_text(self, wide: Optional[bool] = None) -> str:
        if wide is None:
            wide = self.is_wide()
        if wide:
            # a lone wide symbol keeps a trailing comma so "12," is not read as 1,2
            text = ','.join(str(s) for s in self.symbols)
            return text + ',' if self.depth == 1 else text
        return ''.join(str(s) for s in self.symbols)

    def __str__(self) -> str:
        return self.to_text() or 'ε'


def validate_address(sig: Signature, address: Address) -> Address:
    """Check that every symbol is in range for the signature."""
    for position, symbol in enumerate(address.symbols):
        bound = sig.arity(position)
        if not 0 <= symbol < bound:
            raise InvalidAddress(
                f"Symbol {symbol} at position {position} of {address} outside 0..{bound - 1} for {sig}")
    return address


def cylinder_mass(sig: Signature, v: Address) -> Fraction:
    """Uniform measure of the cylinder of ends through v."""
    if v.is_root():
        return Fraction(1)
    return Fraction(1, sig.k * sig.d ** (v.depth - 1))


def _check_depth(depth: int, depth_limit: Optional[int]):
    limit = depth_limit or config.depth_limit
    if depth > limit:
        raise DepthLimit(f"Depth {depth} exceeds the depth limit {limit}")


def _prefix_free(addresses: Sequence[Address]) -> bool:
    """For a sorted sequence, a prefix always sits right before some extension."""
    return all(not a.is_prefix_of(b) for a, b in zip(addresses, addresses[1:]))


@dataclass(frozen=True)
class LeafSet:
    """The boundary of a finite complete subtree containing the root."""

    signature: Signature
    leaves: Tuple[Address, ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(self.leaves)))
        if len(ordered) != len(self.leaves):
            raise InvalidLeafSet("Leaf set contains a repeated address")
        object.__setattr__(self, 'leaves', ordered)
        if not ordered:
            raise InvalidLeafSet("Leaf set is empty")
        for leaf in ordered:
            validate_address(self.signature, leaf)
            if leaf.is_root():
                raise InvalidLeafSet("The root cannot be a leaf")
        if not _prefix_free(ordered):
            raise InvalidLeafSet(f"Leaves are not prefix-free: {self.to_text()}")
        total = sum((cylinder_mass(self.signature, leaf) for leaf in ordered), Fraction(0))
        if total != 1:
            raise InvalidLeafSet(f"Leaf masses sum to {total}, not 1: {self.to_text()}")

    @classmethod
    def base(cls, sig: Signature) -> 'LeafSet':
        return cls(sig, tuple(Address.of(i) for i in range(sig.k)))

    @classmethod
    def parse(cls, sig: Signature, text: str) -> 'LeafSet':
        """Parse "{0,10,11}"; leaves with a symbol above 9 are separated by ';'."""
        body = text.strip()
        if not (body.startswith('{') and body.endswith('}')):
            raise CodecError(f"Leaf set must be enclosed in braces: {text!r}")
        body = body[1:-1].strip()
        if not body:
            raise CodecError("Leaf set is empty")
        wide = sig.d > 10 or sig.k > 10
        separator = ';' if ';' in body or wide else ','
        return cls(sig, tuple(Address.parse(part) for part in body.split(separator)))

    def __len__(self) -> int:
        return len(self.leaves)

    def __iter__(self) -> Iterator[Address]:
        return iter(self.leaves)

    def __contains__(self, address: Address) -> bool:
        return address in self._index

    @property
    def _index(self) -> Dict[Address, int]:
        cached = self.__dict__.get('_index_cache')
        if cached is None:
            cached = {leaf: i for i, leaf in enumerate(self.leaves)}
            object.__setattr__(self, '_index_cache', cached)
        return cached

    def index(self, address: Address) -> int:
        try:
            return self._index[address]
        except KeyError:
            raise LeafNotPresent(f"{address} is not a leaf of {self.to_text()}") from None

    @property
    def max_depth(self) -> int:
        return max(leaf.depth for leaf in self.leaves)

    def leaf_above(self, address: Address) -> Optional[Address]:
        """The leaf that is a prefix of ``address``, if any."""
        for length in range(1, address.depth + 1):
            candidate = address.prefix(length)
            if candidate in self._index:
                return candidate
        return None

    def leaves_below(self, address: Address) -> List[Address]:
        return [leaf for leaf in self.leaves if address.is_prefix_of(leaf)]

    def refines(self, other: 'LeafSet') -> bool:
        """Every leaf of self lies at or below a leaf of other."""
        return all(other.leaf_above(leaf) is not None for leaf in self.leaves)

    def wide(self) -> bool:
        return self.signature.d > 10 or self.signature.k > 10

    def to_list(self) -> List[str]:
        wide = self.wide()
        return [leaf.to_text(wide) for leaf in self.leaves]

    def to_text(self) -> str:
        separator = ';' if self.wide() else ','
        return '{' + separator.join(self.to_list()) + '}'

    def __str__(self) -> str:
        return self.to_text()


def _same_signature(*items) -> Signature:
    sig = items[0].signature
    for item in items[1:]:
        if item.signature != sig:
            raise SignatureMismatch(f"{item.signature} does not match {sig}")
    return sig


def expand_leaf(leaves: LeafSet, v: Address, depth_limit: Optional[int] = None) -> LeafSet:
    """Replace the leaf v by its d children."""
    if v not in leaves:
        raise LeafNotPresent(f"{v} is not a leaf of {leaves}")
    _check_depth(v.depth + 1, depth_limit)
    children = tuple(v.child(i) for i in range(leaves.signature.d))
    rest = tuple(leaf for leaf in leaves.leaves if leaf != v)
    return LeafSet(leaves.signature, rest + children)


def ball_leafset(sig: Signature, n: int, depth_limit: Optional[int] = None) -> LeafSet:
    """All k·d^(n-1) addresses of depth n."""
    if n < 1:
        raise InvalidLeafSet(f"Ball radius must be at least 1, got {n}")
    _check_depth(n, depth_limit)
    words = [Address.of(i) for i in range(sig.k)]
    for _ in range(n - 1):
        words = [w.child(i) for w in words for i in range(sig.d)]
    return LeafSet(sig, tuple(words))


def common_refinement(first: LeafSet, second: LeafSet) -> LeafSet:
    """Coarsest leaf set refining both: each end keeps the longer of its two prefixes."""
    sig = _same_signature(first, second)
    union = sorted(set(first.leaves) | set(second.leaves))
    kept = [a for a, b in zip(union, union[1:]) if not a.is_prefix_of(b)]
    kept.append(union[-1])
    return LeafSet(sig, tuple(kept))


def complete_clopen(sig: Signature, cylinders: Iterable[Address],
                    depth_limit: Optional[int] = None) -> LeafSet:
    """Coarsest leaf set having every given (prefix-free) cylinder as a leaf."""
    wanted = sorted(set(cylinders))
    if not _prefix_free(wanted):
        raise InvalidLeafSet("Cylinders to complete are not prefix-free")
    leaves = set(LeafSet.base(sig).leaves)
    for target in wanted:
        validate_address(sig, target)
        if target.is_root():
            raise InvalidAddress("The root is not a cylinder of a leaf set")
        _check_depth(target.depth, depth_limit)
        for length in range(1, target.depth):
            vertex = target.prefix(length)
            if vertex in leaves:
                leaves.remove(vertex)
                leaves.update(vertex.child(i) for i in range(sig.d))
    return LeafSet(sig, tuple(leaves))


def reduced_signature(sig: Signature) -> Signature:
    """
    The representative (d, k') with 2 <= k' <= d of the isomorphism class.

    Expanding one root child turns T_{d,k} into T_{d,k+d-1} without changing
    the group, so only k modulo d - 1 matters.
    """
    return Signature(sig.d, 2 + (sig.k - 2) % (sig.d - 1))


@dataclass(frozen=True)
class Clopen:
    """
    A finite union of cylinders, stored prefix-free with full sibling families merged.

    ``given`` keeps the cylinders as written, sorted; it takes no part in equality.
    """

    signature: Signature
    cylinders: Tuple[Address, ...]
    given: Tuple[Address, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        for address in self.cylinders:
            validate_address(self.signature, address)
            if address.is_root():
                raise InvalidAddress("Use the k root children for the whole boundary")
        object.__setattr__(self, 'given', tuple(sorted(set(self.cylinders))))
        object.__setattr__(self, 'cylinders', _normalize(self.signature, self.cylinders))

    @classmethod
    def empty(cls, sig: Signature) -> 'Clopen':
        return cls(sig, ())

    @classmethod
    def whole(cls, sig: Signature) -> 'Clopen':
        return cls(sig, LeafSet.base(sig).leaves)

    @classmethod
    def parse(cls, sig: Signature, text: str) -> 'Clopen':
        body = text.strip()
        if body in ('{}', ''):
            return cls.empty(sig)
        if body.startswith('{'):
            body = body[1:-1]
        wide = sig.d > 10 or sig.k > 10
        separator = ';' if ';' in body or wide else ','
        return cls(sig, tuple(Address.parse(part) for part in body.split(separator)))

    def __len__(self) -> int:
        return len(self.cylinders)

    def __iter__(self) -> Iterator[Address]:
        return iter(self.cylinders)

    def is_empty(self) -> bool:
        return not self.cylinders

    def is_whole(self) -> bool:
        return self.mass() == 1

    def mass(self) -> Fraction:
        return sum((cylinder_mass(self.signature, c) for c in self.cylinders), Fraction(0))

    def contains_address(self, address: Address) -> bool:
        """Whether the cylinder of ``address`` lies inside the set."""
        return any(c.is_prefix_of(address) for c in self.cylinders)

    def meets_address(self, address: Address) -> bool:
        return any(c.comparable(address) for c in self.cylinders)

    def contains(self, other: 'Clopen') -> bool:
        _same_signature(self, other)
        return all(self.contains_address(c) for c in other.cylinders)

    def disjoint(self, other: 'Clopen') -> bool:
        _same_signature(self, other)
        return not any(self.meets_address(c) for c in other.cylinders)

    def union(self, other: 'Clopen') -> 'Clopen':
        _same_signature(self, other)
        return Clopen(self.signature, self.cylinders + other.cylinders)

    def complement(self) -> 'Clopen':
        if self.is_empty():
            return Clopen.whole(self.signature)
        completed = complete_clopen(self.signature, self.cylinders)
        rest = tuple(leaf for leaf in completed if leaf not in self.cylinders)
        return Clopen(self.signature, rest)

    def to_list(self) -> List[str]:
        wide = self.signature.d > 10 or self.signature.k > 10
        return [c.to_text(wide) for c in self.cylinders]

    def to_text(self) -> str:
        wide = self.signature.d > 10 or self.signature.k > 10
        return '{' + (';' if wide else ',').join(self.to_list()) + '}'

    def __str__(self) -> str:
        return self.to_text()


def _normalize(sig: Signature, cylinders: Iterable[Address]) -> Tuple[Address, ...]:
    ordered = sorted(set(cylinders))
    # drop cylinders already covered by a shorter one
    kept: List[Address] = []
    for address in ordered:
        if kept and kept[-1].is_prefix_of(address):
            continue
        kept.append(address)

    current = set(kept)
    changed = True
    while changed:
        changed = False
        families: Dict[Address, int] = {}
        for address in current:
            if address.depth >= 2:
                families[address.parent] = families.get(address.parent, 0) + 1
        for parent, count in families.items():
            if count == sig.d:
                current.difference_update(parent.child(i) for i in range(sig.d))
                current.add(parent)
                changed = True
    return tuple(sorted(current))


def clopen_contains(alpha: Clopen, beta: Clopen) -> bool:
    return alpha.contains(beta)


def clopen_disjoint(alpha: Clopen, beta: Clopen) -> bool:
    return alpha.disjoint(beta)


def clopen_complement(alpha: Clopen) -> Clopen:
    return alpha.complement()


def require_nonempty(alpha: Clopen, message: str = "The clopen set is empty") -> Clopen:
    if alpha.is_empty():
        raise EmptyClopen(message)
    return alpha
