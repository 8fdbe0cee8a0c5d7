// placeholder, implementation forthcoming
