"""p-canonical basis assembly, property checks and tilting characters."""
