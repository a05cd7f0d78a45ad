class LangWorldError(Exception):
    """Base class for every error raised by the benchmark code."""

    kind = "error"

    def __str__(self):
        return "%s: %s" % (self.kind, super().__str__())

    def __reduce__(self):
        # errors raised in worker processes are pickled back to the parent
        return (self.__class__, getattr(self, "init_args", self.args))


class UnknownTaskError(LangWorldError):
    kind = "unknown-task"


class HorizonExceededError(LangWorldError):
    kind = "horizon-exceeded"


class UnknownObjectError(LangWorldError):
    kind = "unknown-object"

    def __init__(self, name, known):
        self.init_args = (name, known)
        self.name = name
        self.known = tuple(known)
        super().__init__(
            "unknown object %r (known: %s)" % (name, ", ".join(self.known))
        )


class QueryParseError(LangWorldError):
    kind = "query-parse"

    def __init__(self, message, hint=None):
        self.init_args = (message, hint)
        self.hint = hint
        if hint:
            message = "%s (did you mean %r?)" % (message, hint)
        super().__init__(message)


class InvalidPlanError(LangWorldError):
    kind = "invalid-plan"


class MissingPlanError(LangWorldError):
    kind = "missing-plan"


class DemoGenerationError(LangWorldError):
    kind = "demo-generation"

    def __init__(self, task_name, message):
        self.init_args = (task_name, message)
        self.task_name = task_name
        super().__init__("%s: %s" % (task_name, message))


class PlanDecodeError(LangWorldError):
    kind = "plan-decode"

    def __init__(self, message, raw_text):
        self.init_args = (message, raw_text)
        self.raw_text = raw_text
        super().__init__(message)


class MissingFixtureError(LangWorldError):
    kind = "missing-fixture"


class CompletionTransportError(LangWorldError):
    kind = "completion-transport"


class CompletionStatusError(LangWorldError):
    kind = "completion-status"

    def __init__(self, status_code, body):
        self.init_args = (status_code, body)
        self.status_code = status_code
        self.body = body
        super().__init__("backend answered %d: %s" % (status_code, body[:200]))


class GradientCheckError(LangWorldError):
    kind = "gradient-check"
