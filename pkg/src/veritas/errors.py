"""Exception hierarchy; the CLI maps each class to an exit code."""


class VeritasError(Exception):
    exit_code = 3


class ConfigError(VeritasError):
    """Bad configuration, missing resource or invalid argument."""

    exit_code = 1


class DataError(VeritasError):
    """Input data that cannot be processed (empty corpus, single class, ...)."""

    exit_code = 2


class PipelineError(VeritasError):
    """Unexpected failure inside a pipeline stage."""

    exit_code = 3

    def __init__(self, stage, cause):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
