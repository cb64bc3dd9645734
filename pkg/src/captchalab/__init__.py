"""captchalab: generate degraded text CAPTCHAs, break them with a classical
OCR pipeline, run human-vs-machine trials over HTTP, and build extended
object-and-question challenges with guessing-probability estimates."""

__version__ = "0.1.0"
