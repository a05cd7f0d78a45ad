#!/usr/bin/env python
"""``lw``: the langworld command-line tool."""
import os
import sys

# accepted by Django itself rather than by one of our commands
BUILTIN = {"help", "version", "--help", "-h", "--version"}


def main(argv=None):
    argv = list(sys.argv if argv is None else argv)
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'langworld.settings')
    try:
        import django
        from django.core.management import execute_from_command_line, get_commands
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    django.setup()
    commands = get_commands()
    command = argv[1] if len(argv) > 1 else None
    if command and not command.startswith("-") and command not in commands and command not in BUILTIN:
        ours = sorted(name for name, app in commands.items() if app == 'langworld.cli')
        sys.stderr.write(
            "Unknown command: %r\nAvailable commands: %s, test\n" % (command, ", ".join(ours))
        )
        sys.exit(2)
    execute_from_command_line(argv)


if __name__ == '__main__':
    main()
