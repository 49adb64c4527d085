"""betti_regions.polyhedral"""
