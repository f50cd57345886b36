"""Exception types shared across the package.

InputError: the caller handed us malformed data (bad dimensions, a set that
is not open, a dangling face reference, ...).  Maps to exit code 1 in the CLI.

ContractViolation: an internal consistency guarantee failed (d∘d != 0, a
snake-lemma solve with no solution, ...).  Maps to exit code 2.
"""


class InputError(ValueError):
    pass


class ContractViolation(RuntimeError):
    pass
