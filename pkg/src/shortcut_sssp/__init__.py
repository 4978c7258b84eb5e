"""Single-source shortest paths with negative real weights by iterative shortcutting."""
