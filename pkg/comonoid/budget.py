"""Node budget shared across nested searches."""

from .config import DEFAULT_NODE_BUDGET


class BudgetExhausted(Exception):
    """Raised inside a search when the node budget runs out; never escapes the package"""


class Budget:
    """Mutable node counter; one instance can bound several searches in sequence"""

    __slots__ = ("limit", "used")

    def __init__(self, limit=None):
        self.limit = DEFAULT_NODE_BUDGET if limit is None else int(limit)
        self.used = 0

    @classmethod
    def coerce(cls, budget):
        """Accept None, an int limit or an existing Budget"""
        if isinstance(budget, Budget):
            return budget
        return cls(budget)

    @property
    def remaining(self):
        return max(self.limit - self.used, 0)

    def spend(self, nodes=1):
        self.used += nodes
        if self.used > self.limit:
            raise BudgetExhausted()

    def __repr__(self):
        return f"Budget(used={self.used}, limit={self.limit})"
