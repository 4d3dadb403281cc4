"""Batch toolkit for building soccer video instruction datasets.

Stages: annotation ingestion, single-event clip segmentation,
consecutive-event pairing, caption/commentary fusion, LLM-backed QA
generation, media cutting and token budgeting, and a judge-based
evaluation harness with classification metrics. See the `soccerforge`
CLI for the end-to-end pipeline.
"""

__version__ = "0.1.0"
