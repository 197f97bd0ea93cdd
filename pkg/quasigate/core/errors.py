"""
Exception hierarchy for the loop engine.
Every error raised by quasigate derives from QuasiGateError so the CLI and
the HTTP routes can map it to a single exit code / status.
"""


class QuasiGateError(Exception):
    """Base class for all quasigate errors."""


class InputError(QuasiGateError):
    """Unparseable or inconsistent input (JSON, rationals, ring names)."""


class SurfaceError(QuasiGateError):
    """The quasi-surface itself is invalid."""


class MalformedLoopError(QuasiGateError):
    """Strand alternation, ypath endpoints or coordinates are wrong."""


class GenericityError(QuasiGateError):
    """Coincident boundary coordinates or three chords through one point."""


class WordError(QuasiGateError):
    """A word that is not a closed edge cycle in Y + star."""


class MoveError(QuasiGateError):
    """A homotopy move whose pattern does not match the loop."""


class SimplificationError(QuasiGateError):
    """make_simple ran out of rounds."""
