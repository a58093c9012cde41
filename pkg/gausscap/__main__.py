from gausscap.cli import main

main(prog_name="gausscap")
