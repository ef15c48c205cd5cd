# Command-line front end and result export
