"""
Almost automorphisms of T_{d,k} with finite-state tails.

An element is a tree-pair diagram: a bijection between the leaves of two
finite complete subtrees together with, for every leaf, a state of a tail
machine describing how the subtree below the source is carried onto the
subtree below the target.  An end v·x with v a source leaf is sent to
u·q(x), where u is the target and q the tail state.

Elements compose with the right factor applied first.  Equality is decided
exactly: g equals h when g ∘ h⁻¹ fixes every end.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from ..config import config
from ..exceptions import (
    DepthLimit, InvalidElement, InvalidLeafSet, PrefixTooShort, SignatureMismatch,
    SupportNotClopen,
)
from ..tree.addresses import (
    Address, Clopen, LeafSet, Signature, common_refinement, complete_clopen, require_nonempty,
)
from .machine import TailMachine, product_machine

logger = logging.getLogger(__name__)


class Piece(NamedTuple):
    """One leaf of the diagram: Cyl(source) is carried onto Cyl(target) by ``state``."""

    source: Address
    target: Address
    state: int


@dataclass(frozen=True)
class AlmostAuto:
    signature: Signature
    pieces: Tuple[Piece, ...]
    machine: TailMachine

    def __post_init__(self):
        pieces = tuple(sorted(Piece(*p) for p in self.pieces))
        object.__setattr__(self, 'pieces', pieces)
        if self.machine.degree != self.signature.d:
            raise InvalidElement(
                f"Machine alphabet {self.machine.degree} does not match d={self.signature.d}")
        for piece in pieces:
            if not 0 <= piece.state < self.machine.states:
                raise InvalidElement(f"Leaf {piece.source} uses unknown state {piece.state}")
        targets = [p.target for p in pieces]
        if len(set(targets)) != len(targets):
            raise InvalidElement("Leaf map is not injective")
        try:
            LeafSet(self.signature, tuple(p.source for p in pieces))
            LeafSet(self.signature, tuple(targets))
        except InvalidLeafSet as e:
            raise InvalidElement(f"Invalid tree-pair diagram: {e}") from e

    @property
    def dom(self) -> LeafSet:
        return LeafSet(self.signature, tuple(p.source for p in self.pieces))

    @property
    def ran(self) -> LeafSet:
        return LeafSet(self.signature, tuple(p.target for p in self.pieces))

    @property
    def leaf_map(self) -> Dict[Address, Address]:
        return {p.source: p.target for p in self.pieces}

    @property
    def tails(self) -> Dict[Address, int]:
        return {p.source: p.state for p in self.pieces}

    def piece_at(self, source: Address) -> Piece:
        for piece in self.pieces:
            if piece.source == source:
                return piece
        raise PrefixTooShort(f"{source} is not a domain leaf")

    def __mul__(self, other: 'AlmostAuto') -> 'AlmostAuto':
        return aa_compose(self, other)

    def inverse(self) -> 'AlmostAuto':
        return aa_inverse(self)

    def __str__(self) -> str:
        identity = self.machine.identity
        arrows = ', '.join(
            f"{p.source}->{p.target}" + (f"[{p.state}]" if p.state != identity else '')
            for p in self.pieces)
        return f"<{arrows}>"


def _same_signature(g: AlmostAuto, h) -> Signature:
    if g.signature != h.signature:
        raise SignatureMismatch(f"{g.signature} does not match {h.signature}")
    return g.signature


def _depth_guard(depth: int, depth_limit: Optional[int]):
    limit = depth_limit or config.depth_limit
    if depth > limit:
        raise DepthLimit(f"Refinement reached depth {depth}, beyond the limit {limit}")


def expand_piece(machine: TailMachine, piece: Piece) -> List[Piece]:
    """Children v·i ↦ u·λ(q, i) with state δ(q, i)."""
    source, target, q = piece
    return [
        Piece(source.child(i), target.child(machine.output[q][i]), machine.delta[q][i])
        for i in range(machine.degree)
    ]


def _refine(g: AlmostAuto, wanted: LeafSet, by_target: bool,
            depth_limit: Optional[int]) -> AlmostAuto:
    if wanted.signature != g.signature:
        raise SignatureMismatch(f"{wanted.signature} does not match {g.signature}")
    side = 'target' if by_target else 'source'
    done: List[Piece] = []
    queue = list(g.pieces)
    while queue:
        piece = queue.pop()
        leaf = piece.target if by_target else piece.source
        if leaf in wanted:
            done.append(piece)
            continue
        if wanted.leaf_above(leaf) is not None:
            raise InvalidLeafSet(f"{wanted} does not refine the {side} leaves of {g}")
        _depth_guard(leaf.depth + 1, depth_limit)
        queue.extend(expand_piece(g.machine, piece))
    return AlmostAuto(g.signature, tuple(done), g.machine)


def refine_domain(g: AlmostAuto, wanted: LeafSet, depth_limit: Optional[int] = None) -> AlmostAuto:
    """The same element presented with domain ``wanted`` (which must refine g.dom)."""
    return _refine(g, wanted, False, depth_limit)


def refine_range(g: AlmostAuto, wanted: LeafSet, depth_limit: Optional[int] = None) -> AlmostAuto:
    """The same element presented with range ``wanted`` (which must refine g.ran)."""
    return _refine(g, wanted, True, depth_limit)


def _tidy(sig: Signature, pieces: Sequence[Piece], machine: TailMachine) -> AlmostAuto:
    """Minimize the machine, drop unused states and renumber in breadth-first order."""
    minimal, merged = machine.minimize()
    pieces = [Piece(p.source, p.target, merged[p.state]) for p in sorted(pieces)]
    trimmed, renumber = minimal.trim(p.state for p in pieces)
    return AlmostAuto(sig, tuple(Piece(p.source, p.target, renumber[p.state]) for p in pieces), trimmed)


def aa_compose(g: AlmostAuto, h: AlmostAuto, depth_limit: Optional[int] = None) -> AlmostAuto:
    """g ∘ h: apply h, then g."""
    sig = _same_signature(g, h)
    meeting = common_refinement(h.ran, g.dom)
    h_fine = refine_range(h, meeting, depth_limit)
    g_fine = refine_domain(g, meeting, depth_limit)

    g_by_source = {p.source: p for p in g_fine.pieces}
    matched = [(p, g_by_source[p.target]) for p in h_fine.pieces]
    machine, numbering = product_machine(
        g.machine, h.machine, [(gp.state, hp.state) for hp, gp in matched])
    pieces = [Piece(hp.source, gp.target, numbering[(gp.state, hp.state)]) for hp, gp in matched]
    return _tidy(sig, pieces, machine)


def aa_inverse(g: AlmostAuto) -> AlmostAuto:
    pieces = tuple(Piece(p.target, p.source, p.state) for p in g.pieces)
    return AlmostAuto(g.signature, pieces, g.machine.inverse())


def is_identity(g: AlmostAuto) -> bool:
    """
    True when every end is fixed.

    An element fixing every end must carry each source cylinder onto itself
    with a tail state that fixes every word, and conversely, so no further
    refinement is needed.
    """
    plain = g.machine.identity_acting_states()
    return all(p.source == p.target and p.state in plain for p in g.pieces)


def aa_equals(g: AlmostAuto, h: AlmostAuto, depth_limit: Optional[int] = None) -> bool:
    _same_signature(g, h)
    return is_identity(aa_compose(g, aa_inverse(h), depth_limit))


def canonicalize(g: AlmostAuto) -> AlmostAuto:
    """
    Normal form: minimal machine, then sibling families collapsed deepest first.

    The family v·0, ..., v·(d-1) (v not the root) collapses to v when its
    targets are u·λ(q, i) for a common parent u with tails δ(q, i), for some
    state q already present in the machine.
    """
    current = _tidy(g.signature, g.pieces, g.machine)
    machine = current.machine
    d = g.signature.d
    pieces: Dict[Address, Piece] = {p.source: p for p in current.pieces}

    changed = True
    while changed:
        changed = False
        families: Dict[Address, List[Piece]] = {}
        for piece in pieces.values():
            if piece.source.depth >= 2:
                families.setdefault(piece.source.parent, []).append(piece)
        for parent in sorted(families, key=lambda v: (-v.depth, v)):
            family = families[parent]
            if len(family) != d or any(p.source not in pieces for p in family):
                continue
            family.sort()
            targets = [p.target for p in family]
            if any(t.depth < 2 for t in targets):
                continue
            image_parent = targets[0].parent
            if any(t.parent != image_parent for t in targets):
                continue
            state = machine.find_state([t.symbols[-1] for t in targets], [p.state for p in family])
            if state is None:
                continue
            for p in family:
                del pieces[p.source]
            pieces[parent] = Piece(parent, image_parent, state)
            changed = True

    return _tidy(g.signature, list(pieces.values()), machine)


def apply_to_prefix(g: AlmostAuto, w: Address) -> Tuple[Address, int]:
    """Image prefix of Cyl(w) and the state acting on the rest of the end."""
    leaf = g.dom.leaf_above(w)
    if leaf is None:
        raise PrefixTooShort(f"{w} does not reach a domain leaf of {g}")
    piece = g.piece_at(leaf)
    image, state = g.machine.act(piece.state, w.suffix_after(leaf))
    return piece.target.extend(image), state


def _moved_words(machine: TailMachine) -> Dict[int, List[Tuple[int, ...]]]:
    """
    For each state, the relative cylinders whose union is the closure of its moved words.

    Raises SupportNotClopen when some state with an open fixed region lies on
    a cycle of fixed letters.
    """
    d = machine.degree
    plain = machine.identity_acting_states()
    # states whose moved words are dense: greatest fixed point
    dense = set(range(machine.states)) - plain
    changed = True
    while changed:
        changed = False
        for q in list(dense):
            for i in range(d):
                if machine.output[q][i] == i and machine.delta[q][i] not in dense:
                    dense.discard(q)
                    changed = True
                    break

    memo: Dict[int, List[Tuple[int, ...]]] = {}

    def words(q: int, visiting: Set[int]) -> List[Tuple[int, ...]]:
        if q in plain:
            return []
        if q in dense:
            return [()]
        if q in memo:
            return memo[q]
        if q in visiting:
            raise SupportNotClopen(f"State {q} lies on a fixed cycle; its support accumulates at a fixed end")
        result = []
        for i in range(d):
            if machine.output[q][i] != i:
                result.append((i,))
            else:
                result.extend((i,) + w for w in words(machine.delta[q][i], visiting | {q}))
        memo[q] = result
        return result

    return {q: words(q, set()) for q in range(machine.states)}


def support(g: AlmostAuto) -> Clopen:
    """Closure of the set of moved ends."""
    relative = _moved_words(g.machine)
    cylinders: List[Address] = []
    for piece in g.pieces:
        if piece.source != piece.target:
            cylinders.append(piece.source)
        else:
            cylinders.extend(piece.source.extend(w) for w in relative[piece.state])
    return Clopen(g.signature, tuple(cylinders))


def is_level_preserving(g: AlmostAuto) -> bool:
    return all(p.source.depth == p.target.depth for p in g.pieces)


def _refine_against(g: AlmostAuto, alpha: Clopen, depth_limit: Optional[int]) -> AlmostAuto:
    """Present g so that every source and target leaf lies inside or outside α."""
    frame = complete_clopen(g.signature, alpha.cylinders, depth_limit)
    g = refine_domain(g, common_refinement(g.dom, frame), depth_limit)
    return refine_range(g, common_refinement(g.ran, frame), depth_limit)


def rist_member(g: AlmostAuto, alpha: Clopen, depth_limit: Optional[int] = None) -> bool:
    """Whether g fixes every end outside α."""
    _same_signature(g, alpha)
    outside = alpha.complement()
    if outside.is_empty():
        return True
    frame = complete_clopen(g.signature, outside.cylinders, depth_limit)
    fine = refine_domain(g, common_refinement(g.dom, frame), depth_limit)
    plain = fine.machine.identity_acting_states()
    return all(p.source == p.target and p.state in plain
               for p in fine.pieces if outside.contains_address(p.source))


def is_thompson_F(g: AlmostAuto) -> bool:
    """Identity tails and an order-preserving leaf map."""
    plain = g.machine.identity_acting_states()
    if any(p.state not in plain for p in g.pieces):
        return False
    targets = [p.target for p in g.pieces]
    return targets == sorted(targets)


@dataclass(frozen=True)
class RistRelabeling:
    """
    The identification of rist(α) with the almost automorphisms of T_{d,m}.

    The i-th cylinder of α (in lexicographic order) becomes the i-th root child.
    """

    clopen: Clopen
    local_signature: Signature = field(init=False)

    def __post_init__(self):
        require_nonempty(self.clopen, "Cannot relabel an empty clopen set")
        m = len(self.clopen.cylinders)
        object.__setattr__(self, 'local_signature',
                           Signature(self.clopen.signature.d, m, non_standard=(m == 1)))

    @property
    def non_standard(self) -> bool:
        return self.local_signature.non_standard

    def forward(self) -> Dict[Address, Address]:
        return {c: Address.of(i) for i, c in enumerate(self.clopen.cylinders)}

    def to_local(self, address: Address) -> Address:
        for i, c in enumerate(self.clopen.cylinders):
            if c.is_prefix_of(address):
                return Address((i,) + address.suffix_after(c))
        raise InvalidElement(f"{address} is not inside {self.clopen}")

    def to_global(self, address: Address) -> Address:
        if address.is_root() or address.first >= len(self.clopen.cylinders):
            raise InvalidElement(f"{address} is not a vertex below a root child of {self.local_signature}")
        return self.clopen.cylinders[address.first].extend(address.tail)

    def localize(self, g: AlmostAuto, depth_limit: Optional[int] = None) -> AlmostAuto:
        """The element of N_{d,m} corresponding to g ∈ rist(α)."""
        if not rist_member(g, self.clopen, depth_limit):
            raise InvalidElement(f"{g} moves ends outside {self.clopen}")
        fine = _refine_against(g, self.clopen, depth_limit)
        pieces = tuple(Piece(self.to_local(p.source), self.to_local(p.target), p.state)
                       for p in fine.pieces if self.clopen.contains_address(p.source))
        return _tidy(self.local_signature, pieces, fine.machine)

    def globalize(self, h: AlmostAuto, depth_limit: Optional[int] = None) -> AlmostAuto:
        """The element of rist(α) corresponding to h, identity outside α."""
        if h.signature != self.local_signature:
            raise SignatureMismatch(f"{h.signature} does not match {self.local_signature}")
        sig = self.clopen.signature
        frame = complete_clopen(sig, self.clopen.cylinders, depth_limit)
        pieces = [Piece(self.to_global(p.source), self.to_global(p.target), p.state) for p in h.pieces]
        pieces.extend(Piece(leaf, leaf, h.machine.identity)
                      for leaf in frame if not self.clopen.contains_address(leaf))
        return _tidy(sig, pieces, h.machine)

    def to_dict(self) -> dict:
        return {
            'signature': self.local_signature.to_list(),
            'non_standard': self.non_standard,
            'relabel': {c.to_text(): Address.of(i).to_text() for i, c in enumerate(self.clopen.cylinders)},
        }


def relabel_rist(alpha: Clopen) -> RistRelabeling:
    return RistRelabeling(alpha)

