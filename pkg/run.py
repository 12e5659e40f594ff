# File: run.py

from skyport.cli import main

# ─── Entry point: python run.py <command> ... ─────────────────────
if __name__ == "__main__":
    main()
