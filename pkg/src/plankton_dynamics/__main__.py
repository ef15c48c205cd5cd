from plankton_dynamics.cli.main import main

main()
