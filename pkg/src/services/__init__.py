# invol Services Package
