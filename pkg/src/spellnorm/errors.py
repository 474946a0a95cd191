"""Exception hierarchy. The CLI maps DataError subclasses to exit code 2."""


class SpellnormError(Exception):
    pass


class DataError(SpellnormError):
    """Bad input data or model files."""


class AlignmentError(DataError):
    """Parallel files disagree on their number of lines."""


class CorpusDecodeError(DataError):
    pass


class InvariantError(DataError):
    """A CharSequence breaks the boundary-marker rules."""


class TrainingError(DataError):
    pass


class ModelLoadError(DataError):
    pass


class ParameterError(SpellnormError, ValueError):
    pass


class DecodeError(SpellnormError):
    pass
