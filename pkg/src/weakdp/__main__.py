from weakdp.cli import main

main()
