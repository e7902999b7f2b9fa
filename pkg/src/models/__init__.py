# invol Models Package
