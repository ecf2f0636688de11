from typing import Optional, Sequence, Union

from utils import find_column


class QcdValidationError(Exception):
    """Bad input: a malformed config, an invalid law, a precondition the caller broke."""


class QcdNumericalError(Exception):
    """A computation that was set up correctly but failed numerically."""


class ConfigLexError(QcdValidationError):
    def __init__(self, t) -> None:
        super().__init__(
            f"Lex error: invalid character {t.value[0]!r} at line {t.lineno}, column {find_column(t.lexer.lexdata, t.lexpos)}"
        )
        self.token = t


class ConfigSyntaxError(QcdValidationError):
    def __init__(self, t, extra: Optional[str] = None) -> None:
        if t is not None:
            msg = (
                f"Syntax error: line {t.lineno}, column {find_column(t.lexer.lexdata, t.lexpos)}"
                + (extra or "")
            )
        else:
            msg = "Syntax error: " + (extra or "unexpected end of input")
        super().__init__(msg)
        self.token = t


class ConfigParseError(QcdValidationError):
    def __init__(self, errors: Sequence[QcdValidationError]) -> None:
        super().__init__("\n".join(map(str, errors)))
        self.errors = list(errors)


class ConfigDuplicateKeyError(QcdValidationError):
    def __init__(self, path: str) -> None:
        super().__init__("Config error: key '%s' is defined twice" % path)


class ConfigUnknownKeyError(QcdValidationError):
    def __init__(self, paths: Sequence[str]) -> None:
        super().__init__("Config error: unknown keys " + ", ".join(sorted(paths)))
        self.paths = list(paths)


class ConfigMissingKeyError(QcdValidationError):
    def __init__(self, path: str) -> None:
        super().__init__("Config error: missing required field '%s'" % path)
        self.path = path


class ConfigTypeError(QcdValidationError):
    def __init__(self, path: str, expected: str, got: object) -> None:
        super().__init__(
            "Config error: field '%s' expects %s, got %r" % (path, expected, got)
        )


class ConfigValueError(QcdValidationError):
    def __init__(self, path: str, reason: str) -> None:
        super().__init__("Config error: field '%s' %s" % (path, reason))


class InvalidLawError(QcdValidationError):
    def __init__(self, law: str, reason: str) -> None:
        super().__init__("Invalid law %s: %s" % (law, reason))


class ZeroProbabilityConditionError(QcdValidationError):
    def __init__(self, k: int) -> None:
        super().__init__(
            "conditioning on zero-probability event: P{tau_a > %d} = 0" % k
        )


class DriftUndefinedError(QcdNumericalError):
    def __init__(self, y: float) -> None:
        super().__init__("drift undefined at observation y = %r" % y)


class DimensionMismatchError(QcdValidationError):
    def __init__(self, what: str, expected: int, got: int) -> None:
        super().__init__("%s: expected dimension %d, got %d" % (what, expected, got))


class LambdaInfiniteError(QcdNumericalError):
    def __init__(self, v: float) -> None:
        super().__init__("Λ infinite at v = %g: assumption (A3) is violated" % v)
        self.v = v


class RootNotFoundError(QcdNumericalError):
    def __init__(self, reason: str) -> None:
        super().__init__("(A3) root not found: %s" % reason)


class RstarUndefinedError(QcdNumericalError):
    def __init__(self) -> None:
        super().__init__("r* undefined: the objective is unbounded below on the search interval")


class Gamma2UnstableError(QcdNumericalError):
    def __init__(self, v: float, d2: float, check: float) -> None:
        super().__init__(
            "Λ'' at v = %g is not a positive finite number: %g and %g at two step sizes" % (v, d2, check)
        )
        self.v = v


class DistinctCentersError(QcdValidationError):
    def __init__(self, k: int, distinct: int) -> None:
        super().__init__(
            "K distinct centers unavailable: asked for %d, found %d" % (k, distinct)
        )


class NumericalBlowupError(QcdNumericalError):
    def __init__(self, index: int) -> None:
        super().__init__("numerical blow-up: non-finite parameter at iterate %d" % index)
        self.index = index


class EpisodeOverflowError(QcdNumericalError):
    def __init__(self, cap: int) -> None:
        super().__init__(
            "episode exceeded %d steps without stopping or regenerating" % cap
        )


class RankDeficientError(QcdNumericalError):
    def __init__(self, what: str, null_space=None) -> None:
        super().__init__("rank-deficient feature covariance (%s)" % what)
        self.null_space = null_space


class PolicyFailsToStopError(QcdNumericalError):
    def __init__(self, capped: int, n_paths: int) -> None:
        super().__init__(
            "policy fails to stop: %d of %d paths hit the step cap" % (capped, n_paths)
        )


class ShiryaevPriorError(QcdValidationError):
    def __init__(self, reason: Union[str, None] = None) -> None:
        super().__init__(
            "Shiryaev recursion requires geometric prior" + (": " + reason if reason else "")
        )


class BatchMeansError(QcdNumericalError):
    def __init__(self, ok: int, needed: int) -> None:
        super().__init__(
            "batch means: only %d successful runs, need at least %d" % (ok, needed)
        )


class DriftArgumentError(QcdValidationError):
    def __init__(self, reason: str) -> None:
        super().__init__("drift arguments: " + reason)
