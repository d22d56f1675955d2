"""draftcanvas: a self-hostable writing workbench.

Prompts live on an infinite canvas as persistent control widgets that steer
iterative text generation and rephrasing. The package ships the canvas
workbench service, a conversational baseline, durable JSON/JSONL storage,
and a statistics toolkit for analyzing paired within-subjects study data.
"""

__version__ = "0.1.0"
