from cohpres.cli import main

if __name__ == "__main__":
    # Same as the installed `cohpres` command, e.g. `python run.py check corpus/ds2.cp`
    main()
