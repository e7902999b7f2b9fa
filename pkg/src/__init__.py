# invol Source Package
