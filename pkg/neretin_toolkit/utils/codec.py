"""
JSON and text formats for elements, measures, permutations and certificates.

Every writer produces plain JSON-able structures; ``dumps`` fixes key order
and separators so equal inputs give byte-identical output.
"""

import json
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from ..elements.almost_auto import AlmostAuto, Piece
from ..elements.machine import TailMachine
from ..exceptions import CodecError, InvalidElement, InvalidLeafSet, TreeError
from ..groups.permutation import Permutation, parse_generator_list
from ..tree.addresses import Address, Clopen, LeafSet, Signature

SCHEMA_KEYS = ('sig', 'dom', 'ran', 'map', 'machine')


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(',', ':'))


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CodecError(f"Invalid JSON: {e}") from e


def _wide(sig: Signature) -> bool:
    return sig.d > 10 or sig.k > 10


def _integer(value: Any, what: str) -> int:
    """JSON integers only; 1.0, true and "1" are all rejected."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise CodecError(f"{what} must be an integer, got {value!r}")
    return value


def _rows(value: Any, what: str) -> List[List[int]]:
    if not isinstance(value, list) or any(not isinstance(row, list) for row in value):
        raise CodecError(f"{what} must be a list of integer rows")
    return [[_integer(x, what) for x in row] for row in value]


def signature_from(value: Any) -> Signature:
    if isinstance(value, str):
        return Signature.parse(value)
    try:
        d, k = value
    except (TypeError, ValueError) as e:
        raise CodecError(f"Signature must be [d, k], got {value!r}") from e
    d, k = _integer(d, 'Signature d'), _integer(k, 'Signature k')
    return Signature(d, k, non_standard=(k == 1))


def element_to_dict(g: AlmostAuto) -> dict:
    wide = _wide(g.signature)
    return {
        'sig': g.signature.to_list(),
        'dom': g.dom.to_list(),
        'ran': g.ran.to_list(),
        'map': [[p.source.to_text(wide), p.target.to_text(wide), p.state] for p in g.pieces],
        'machine': g.machine.to_dict(),
    }


def element_from_dict(data: Any) -> AlmostAuto:
    if not isinstance(data, dict) or any(key not in data for key in SCHEMA_KEYS):
        raise CodecError(f"Element needs the keys {', '.join(SCHEMA_KEYS)}")
    try:
        sig = signature_from(data['sig'])
        machine_data = data['machine']
        machine = TailMachine.from_rows(_rows(machine_data['delta'], 'Machine delta'),
                                        _rows(machine_data['lambda'], 'Machine lambda'),
                                        _integer(machine_data.get('id', 0), 'Machine id'))
        if len(machine_data.get('states', machine.delta)) != machine.states:
            raise CodecError("Machine state list does not match its transition table")
        pieces = tuple(Piece(Address.parse(str(source)), Address.parse(str(target)),
                             _integer(state, 'Piece state'))
                       for source, target, state in data['map'])
        dom = sorted(Address.parse(str(a)) for a in data['dom'])
        ran = sorted(Address.parse(str(a)) for a in data['ran'])
    except (KeyError, TypeError, ValueError, InvalidElement) as e:
        raise CodecError(f"Malformed element: {e}") from e
    if dom != sorted(p.source for p in pieces) or ran != sorted(p.target for p in pieces):
        raise CodecError("dom/ran lists do not match the leaf map")
    try:
        return AlmostAuto(sig, pieces, machine)
    except (InvalidElement, TreeError) as e:
        raise CodecError(f"Invalid element: {e}") from e


def element_to_json(g: AlmostAuto) -> str:
    return dumps(element_to_dict(g))


def element_from_json(text: str) -> AlmostAuto:
    return element_from_dict(loads(text))


def fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Any) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise CodecError(f"Not a rational number: {text!r}") from e


def leafset_from(sig: Signature, value: Any) -> LeafSet:
    try:
        if isinstance(value, str):
            return LeafSet.parse(sig, value)
        return LeafSet(sig, tuple(Address.parse(str(a)) for a in value))
    except (InvalidLeafSet, TreeError, TypeError) as e:
        raise CodecError(f"Invalid leaf set: {e}") from e


def clopen_from(sig: Signature, value: Any) -> Clopen:
    try:
        if isinstance(value, str):
            return Clopen.parse(sig, value)
        return Clopen(sig, tuple(Address.parse(str(a)) for a in value))
    except (TreeError, TypeError) as e:
        raise CodecError(f"Invalid clopen set: {e}") from e


def measure_from_dict(sig: Signature, data: Any):
    from ..services.boundary_dyn import CylinderMeasure
    try:
        support = leafset_from(sig, data['support'])
        masses = tuple(parse_fraction(m) for m in data['masses'])
    except (KeyError, TypeError) as e:
        raise CodecError(f"Measure needs 'support' and 'masses': {e}") from e
    return CylinderMeasure(support, masses)


def permutations_from(value: Any, degree: int = 0) -> List[Permutation]:
    """
    A cycle-notation string "(0 1),(0 1 2 3)" or a list of cycle strings / image arrays.

    An image array fixes its own degree: all arrays, and ``degree`` when it is
    given, must agree.  Cycle strings take that degree, fixing the points
    they do not mention.
    """
    if isinstance(value, str):
        return parse_generator_list(value, degree)
    if not isinstance(value, list):
        raise CodecError(f"Generators must be a string or a list, got {value!r}")
    arrays = {}
    for index, item in enumerate(value):
        if isinstance(item, str):
            continue
        if not isinstance(item, list) or not item:
            raise CodecError(f"Not an image array: {item!r}")
        arrays[index] = tuple(_integer(x, 'Image array entry') for x in item)
    widths = {len(images) for images in arrays.values()}
    if degree > 0:
        widths.add(degree)
    if len(widths) > 1:
        raise CodecError(f"DegreeMismatch: generators of degrees {sorted(widths)} in one list")
    common = widths.pop() if widths else 0

    perms = []
    for index, item in enumerate(value):
        if index in arrays:
            perms.append(Permutation(arrays[index]))
            continue
        perms.extend(parse_generator_list(item, common))
    if not common and perms:
        # cycle strings alone: fixed points are implicit, so pad to the widest
        widest = max(p.degree for p in perms)
        perms = [p if p.degree == widest else Permutation(p.images + tuple(range(p.degree, widest)))
                 for p in perms]
    return perms


def certificate_input(data: Any) -> Tuple[Signature, List[Tuple[int, List[Permutation]]], Optional[int]]:
    """Parse {signature:[d,k], n0?, levels:[{n, generators:[...]}]}."""
    try:
        sig = signature_from(data['signature'])
        levels = []
        for level in data['levels']:
            n = _integer(level['n'], 'Level n')
            if n < 1:
                raise CodecError(f"Levels start at 1, got {n}")
            k_n = sig.k * sig.d ** (n - 1)
            levels.append((n, permutations_from(level['generators'], k_n)))
        n0 = data.get('n0')
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise CodecError(f"Malformed certificate input: {e}") from e
    return sig, levels, (_integer(n0, 'n0') if n0 is not None else None)


def permutation_list(perms: Sequence[Permutation]) -> List[str]:
    return [p.to_cycle_string() for p in perms]
