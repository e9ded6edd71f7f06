from kernel_align.cli import main

main()
