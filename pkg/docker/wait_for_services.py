"""
Block until the Celery broker accepts connections.
"""

import os
import socket
import sys
import time
from urllib.parse import urlparse

TIMEOUT_SECONDS = 60


def broker_address():
    url = os.environ.get('CELERY_BROKER_URL') or os.environ.get('REDIS_URL')
    if url:
        result = urlparse(url)
        if result.scheme == 'memory':
            return None
        if result.hostname and result.port:
            return result.hostname, result.port
        print(f"Could not parse host/port from {url}, falling back to defaults.")
    return os.environ.get('REDIS_HOST', 'redis'), int(os.environ.get('REDIS_PORT', 6379))


def wait_for_broker():
    address = broker_address()
    if address is None:
        print("In-memory broker configured, skipping wait.")
        return True

    host, port = address
    print(f"Waiting for Redis at {host}:{port}...")
    start_time = time.time()
    while True:
        try:
            with socket.create_connection((host, port), timeout=1):
                print("Redis is ready!")
                return True
        except OSError as exc:
            if time.time() - start_time > TIMEOUT_SECONDS:
                print(f"Timeout waiting for Redis: {exc}")
                return False
            time.sleep(1)


if __name__ == "__main__":
    sys.exit(0 if wait_for_broker() else 1)
