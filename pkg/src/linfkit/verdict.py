from dataclasses import asdict, dataclass, field


@dataclass
class Verdict:
    """Outcome of a check: truthy on pass, with a witness on failure.

    ``witness`` is the first failing basis monomial in canonical order;
    ``lhs``/``rhs`` hold both sides of the identity there.
    """

    check: str
    passed: bool
    witness: str = None
    lhs: str = None
    rhs: str = None
    bounds: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return asdict(self)

    def __str__(self):
        head = f"{self.check}: {'PASS' if self.passed else 'FAIL'}"
        if self.bounds:
            head += " (" + ", ".join(f"{k}={v}" for k, v in sorted(self.bounds.items())) + ")"
        if not self.passed and self.witness is not None:
            head += f"\n  witness: {self.witness}"
            if self.lhs is not None:
                head += f"\n  lhs: {self.lhs}\n  rhs: {self.rhs}"
        return head


def first_failure(check, items, compare, space_str, bounds=None):
    """Run ``compare(item) -> (lhs, rhs)`` in order; report the first mismatch."""
    for item in items:
        lhs, rhs = compare(item)
        if lhs != rhs:
            w, l, r = space_str(item, lhs, rhs)
            return Verdict(check, False, w, l, r, dict(bounds or {}))
    return Verdict(check, True, bounds=dict(bounds or {}))
