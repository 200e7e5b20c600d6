"""Zero-shot LLM agent for a desk-scale roguelike, with a handcrafted baseline and evaluation harness."""

__version__ = "0.1.0"
