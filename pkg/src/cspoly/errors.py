"""Exception types raised across the package."""


class CsPolyError(ValueError):
    """Base class for invalid input or refused computations."""


class NotMonicError(CsPolyError):
    pass


class NotDoublyMonicError(CsPolyError):
    pass


class UndecidedError(CsPolyError):
    """A computation could not be completed within its configured bound."""


class BudgetExceededError(CsPolyError):
    def __init__(self, message, volume=None):
        super().__init__(message)
        self.volume = volume


class CheckpointError(CsPolyError):
    pass
