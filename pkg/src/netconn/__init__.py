"""Connectivity testing and partition enumeration for segment/node networks."""
