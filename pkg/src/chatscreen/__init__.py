"""Suicidal-ideation screening: a from-scratch GRU text classifier plus a
chatbot screening service that scores each user message and emits risk
reports."""

__version__ = "0.1.0"
