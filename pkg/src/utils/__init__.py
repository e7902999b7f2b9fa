# invol Utilities Package
