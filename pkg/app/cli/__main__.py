"""Entry point for running the CLI via python -m app.cli"""

from app.cli.main import main

if __name__ == "__main__":
    raise SystemExit(main())
