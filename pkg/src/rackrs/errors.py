"""Error type shared by every module.

All failure modes surface as RackRSError carrying a stable uppercase code
string; the CLI maps codes to exit status 3 (configuration or precondition
problems) while verification mismatches exit with 2.
"""


class RackRSError(Exception):
    """Error with a machine-readable code and a human-readable detail."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}" if detail else code)


def fail(code: str, detail: str = ""):
    raise RackRSError(code, detail)
