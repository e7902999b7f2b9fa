# invol Command Line Package
