import sys

import click
from flask.cli import FlaskGroup

from . import create_app

cli = FlaskGroup(
    name="cohpres",
    help="Coherence checks for presentations modulo.",
    create_app=lambda: create_app(),
    add_default_commands=False,
    add_version_option=False,
    load_dotenv=False,
)


def run(argv) -> int:
    """Run one command and return its exit code instead of exiting."""
    try:
        result = cli.main(args=list(argv), prog_name="cohpres", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        click.echo(f"WITNESS: usage: {e.format_message()}")
        return e.exit_code
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
