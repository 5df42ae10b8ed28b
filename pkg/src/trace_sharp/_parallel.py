import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "TRACE_SHARP_THREADS"


def worker_count():
    """Thread cap from ``TRACE_SHARP_THREADS``; 0 or unset means one per CPU."""
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def map_chunks(fn, chunks):
    """Apply ``fn`` to each chunk, in order, on a thread pool.

    numpy releases the GIL inside its array kernels, which is where sweeps
    spend their time.
    """
    chunks = list(chunks)
    workers = min(worker_count(), len(chunks))
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
