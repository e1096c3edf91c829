class LatticeError(ValueError):
    """Domain error carrying a short machine-readable code.

    The CLI reports these as ``{"error": code, "message": str(exc)}``.
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
