"""State counting for nl^N configurations."""
