__all__ = ["sequences", "proposition_a", "proposition_b"]
