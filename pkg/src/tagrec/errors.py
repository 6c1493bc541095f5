"""Exception types shared across the package."""


class TagrecError(Exception):
    """Base class for all tagrec errors."""


class ResourceError(TagrecError):
    """A required input file is missing or unreadable."""


class EmptyResourceError(ResourceError):
    """An input file was read but yielded no usable entries."""


class ParseError(TagrecError):
    """A malformed row in an input file."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class InputError(TagrecError):
    """A caller-supplied value violated a precondition."""


class UnknownIdError(TagrecError):
    """A lookup referenced an id that does not exist."""


class StructureError(TagrecError):
    """The taxonomy graph violates a structural requirement (e.g. a cycle)."""


class PipelineError(TagrecError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
