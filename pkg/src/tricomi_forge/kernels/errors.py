"""Error type shared by both quadrature backends."""


class MaxDepthExceeded(RuntimeError):
    """Adaptive quadrature hit the subdivision depth cap without converging."""

    def __init__(self, message: str = "adaptive quadrature did not converge",
                 which: str | None = None):
        super().__init__(message if which is None else f"{message} ({which})")
        self.which = which
