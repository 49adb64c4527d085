"""betti_regions.algebra"""
