"""Shared exception types."""


class GroupMismatchError(TypeError):
    """Raised when operands belong to different groups."""


class SizeCapExceeded(RuntimeError):
    """A set or measure-support size cap was exceeded.

    The message always names the cap so that a failed run can be retried
    with an explicit, larger budget instead of silently truncating.
    """

    def __init__(self, what: str, needed: int, cap: int):
        self.what = what
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what}: needs {needed} elements, cap is {cap}")
