"""Exception hierarchy shared across the package."""


class LitsimError(Exception):
    """Base class for all litsim errors."""


# --- metadata ingestion ---------------------------------------------------


class MetadataParseError(LitsimError):
    """Malformed metadata record.  Carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class MetadataRejectedError(LitsimError):
    """Well-formed record missing a required field (e.g. the identifier)."""


# --- LaTeX extraction -----------------------------------------------------


class ExtractionError(LitsimError):
    """Base class for discard-worthy extraction failures."""

    reason = "extraction_failed"


class NoMainFileError(ExtractionError):
    """No uncommented begin-document clause anywhere in the source tree."""

    reason = "no_main_file"


class AmbiguousMainFileError(ExtractionError):
    """More than one begin-document clause; the main file cannot be chosen."""

    reason = "ambiguous_main_file"


class InclusionCycleError(ExtractionError):
    """Input/include recursion exceeded the depth cap (an inclusion cycle)."""

    reason = "inclusion_cycle"


class NoFrontMatterMarkerError(ExtractionError):
    """Neither a section command nor an end-abstract marker was found."""

    reason = "no_front_matter_marker"


# --- NLP ------------------------------------------------------------------


class LexiconFormatError(LitsimError):
    """Lexicon data file violates the format or its internal invariants."""


# --- vectorization --------------------------------------------------------


class EmptyVocabularyError(LitsimError):
    """Vocabulary construction over a corpus with no usable terms."""


class InvariantViolationError(LitsimError):
    """A numeric precondition was violated (e.g. df > number of documents)."""


class DimensionMismatchError(LitsimError):
    """Query vector indices do not fit the index vocabulary."""


# --- index persistence ----------------------------------------------------


class IndexIOError(LitsimError):
    """Base class for index (de)serialization failures."""


class IndexFormatError(IndexIOError):
    """File does not start with the expected magic bytes."""


class IndexVersionError(IndexIOError):
    """File carries an unsupported format version."""


class IndexTruncatedError(IndexIOError):
    """File ends before the declared payload is complete."""


class IndexChecksumError(IndexIOError):
    """Trailing CRC32 does not match the payload."""


# --- query layer ----------------------------------------------------------


class UnknownDocumentError(LitsimError):
    """A document id is not present in the index registry."""


class EmptyQueryError(LitsimError):
    """Free-text query with no dictionary terms surviving the pipeline."""
