"""
Custom exceptions for the Neretin toolkit.

This module defines application-specific exceptions so that callers (and the
CLI) can tell domain errors, malformed input and exhausted budgets apart.
"""


class NeretinToolkitError(Exception):
    """Base class for exceptions in this application."""


class ConfigurationError(NeretinToolkitError):
    """Raised when there's an issue with configuration."""


class CodecError(NeretinToolkitError):
    """Raised when textual or JSON input cannot be parsed."""


class ResourceExhausted(NeretinToolkitError):
    """Raised when a search or refinement budget runs out before an exact answer."""


class DepthLimit(ResourceExhausted):
    """Raised when a tree refinement would exceed the configured depth cap."""


# Permutation groups

class PermGroupError(NeretinToolkitError):
    """Raised for errors in permutation group computations."""


class DegreeMismatch(PermGroupError):
    """Raised when permutations or groups of different degrees are combined."""


class TupleArityTooLarge(PermGroupError):
    """Raised when asking for orbits on tuples longer than the degree."""


class NotTransitive(PermGroupError):
    """Raised when an operation requires a transitive group."""


class NotSubgroup(PermGroupError):
    """Raised when a normalizer is requested for a non-subgroup."""


class OmegaTooSmall(PermGroupError):
    """Raised when an alternating-group test is requested on fewer than 3 points."""


class NoWitness(PermGroupError):
    """Raised when no cycle witness is found within the search budget."""


class DegreeTooLarge(PermGroupError):
    """Raised when exhaustive subgroup enumeration is requested above the cap."""


# Tree model

class TreeError(NeretinToolkitError):
    """Raised for errors related to addresses, leaf sets and clopen sets."""


class InvalidSignature(TreeError):
    """Raised when a signature (d, k) is out of range."""


class SignatureMismatch(TreeError):
    """Raised when objects over different trees T_{d,k} are combined."""


class LeafNotPresent(TreeError):
    """Raised when expanding a leaf that is not in the leaf set."""


class InvalidAddress(TreeError):
    """Raised when an address has out-of-range symbols."""


class InvalidLeafSet(TreeError):
    """Raised when a leaf set is not a complete prefix-free antichain."""


class EmptyClopen(TreeError):
    """Raised when an operation needs a non-empty clopen set."""


# Almost automorphisms

class ElementError(NeretinToolkitError):
    """Raised for errors related to almost automorphisms."""


class InvalidElement(ElementError):
    """Raised when a tree-pair diagram or tail machine is malformed."""


class PrefixTooShort(ElementError):
    """Raised when a prefix does not reach a domain leaf."""


class SupportNotClopen(ElementError):
    """Raised when the support of an element is closed but not clopen."""


# Finite levels

class LevelError(NeretinToolkitError):
    """Raised for errors in the finite-level tower."""


class NotInLevelSubgroup(LevelError):
    """Raised when an element does not lie in O_n."""


class BadLevels(LevelError):
    """Raised when levels are out of range or not contiguous."""


# Measures and dynamics

class MeasureError(NeretinToolkitError):
    """Raised for errors related to cylinder measures and boundary dynamics."""


class InvalidMeasure(MeasureError):
    """Raised when masses are negative or do not sum to one."""


class TargetsNotDisjoint(MeasureError):
    """Raised when displacement targets overlap."""


class PointInsideTarget(MeasureError):
    """Raised when a point to displace already lies in a target."""


class BadPrefix(MeasureError):
    """Raised when a boundary point prefix is empty or malformed."""
