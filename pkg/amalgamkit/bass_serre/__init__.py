__all__ = ["tree", "domain", "graph", "transversal", "laws"]
