"""Exception taxonomy shared across the pipeline.

Every domain failure raises a subclass of :class:`EegnextError` so the CLI
can map any pipeline fault to exit code 1 while naming the failing condition.
"""


class EegnextError(Exception):
    """Base class for all domain errors raised by this package."""


# --- ingest -----------------------------------------------------------------

class TruncatedHeader(EegnextError):
    pass


class MalformedNumeric(EegnextError):
    pass


class InconsistentHeader(EegnextError):
    pass


class UnknownChannel(EegnextError):
    pass


class TruncatedRecord(EegnextError):
    pass


class RateMismatch(EegnextError):
    pass


class LabelCountMismatch(EegnextError):
    pass


class NetworkError(EegnextError):
    pass


class DigestMismatch(EegnextError):
    pass


# --- binary containers ------------------------------------------------------

class BadMagic(EegnextError):
    pass


class VersionMismatch(EegnextError):
    pass


class ChecksumMismatch(EegnextError):
    pass


class TruncatedFile(EegnextError):
    pass


# --- alignment --------------------------------------------------------------

class EmptyTrialList(EegnextError):
    pass


class MixedSubjects(EegnextError):
    pass


class MixedChannelCounts(EegnextError):
    pass


class SingularCovariance(EegnextError):
    pass


class NonSymmetric(EegnextError):
    pass


# --- wavelet ----------------------------------------------------------------

class UnsupportedFamilyParam(EegnextError):
    pass


class EdgeDominated(EegnextError):
    pass


class NonFiniteInput(EegnextError):
    pass


class BadScaleConfig(EegnextError):
    pass


# --- network ----------------------------------------------------------------

class ShapeMismatch(EegnextError):
    pass


class GroupMismatch(EegnextError):
    pass


class NonFiniteActivation(EegnextError):
    pass


class MissingTensor(EegnextError):
    pass


# --- training / evaluation --------------------------------------------------

class MissingClass(EegnextError):
    pass


class NonFiniteLogits(EegnextError):
    pass


class TooFewSubjects(EegnextError):
    pass


class DegenerateClass(EegnextError):
    pass


# --- plotting ---------------------------------------------------------------

class ChannelOutOfRange(EegnextError):
    pass
